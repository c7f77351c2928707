// Copyright 2026 The KDGene Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kdgene/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kdgene/trainer.hpp"

namespace kdgene {

long double reference_loss(const ModelParams& params, std::span<const Triple> batch, double lambda) {
  using Real = long double;
  const ModelShape& s = params.shape();
  const std::size_t H = s.entity_dim;
  auto widen = [](std::span<const double> v) { return std::vector<Real>(v.begin(), v.end()); };
  BasicCellTrace<Real> trace;
  Real total = 0;
  for (const Triple& tr : batch) {
    const auto head = widen(params.head_row(tr.head));
    const auto rel = widen(params.relation_row(tr.relation));
    std::vector<Real> updated;
    if (s.has_cell()) {
      interact<Real>(params.cell(), rel, head, trace);
      updated = trace.output;
    } else {
      updated = rel;
    }
    std::vector<Real> scores(s.num_entities);
    for (std::size_t j = 0; j < s.num_entities; ++j) {
      const auto tail = params.tail_row(entity_id(j));
      Real acc = 0;
      for (std::size_t i = 0; i < H; ++i) acc += head[i] * updated[i] * static_cast<Real>(tail[i]);
      scores[j] = acc;
    }
    const Real top = *std::max_element(scores.begin(), scores.end());
    Real sum = 0;
    for (Real v : scores) sum += std::exp(v - top);
    Real reg = 0;
    const auto tail = params.tail_row(tr.tail);
    for (std::size_t i = 0; i < H; ++i) {
      reg += std::pow(std::abs(head[i]), Real(3)) + std::pow(std::abs(updated[i]), Real(3)) +
             std::pow(std::abs(static_cast<Real>(tail[i])), Real(3));
    }
    total += -scores[index(tr.tail)] + top + std::log(sum) + static_cast<Real>(lambda) * reg;
  }
  return total;
}

GradCheckReport gradient_check(const ModelParams& params, std::span<const Triple> batch,
                               double lambda, double step) {
  std::vector<double> analytic(params.size());
  loss_batch(params, batch, lambda, analytic);

  ModelParams probe = params;
  auto values = probe.values();
  GradCheckReport report;
  report.parameters_checked = values.size();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double original = values[k];
    const double up = original + step;
    const double down = original - step;
    values[k] = up;
    const long double loss_up = reference_loss(probe, batch, lambda);
    values[k] = down;
    const long double loss_down = reference_loss(probe, batch, lambda);
    values[k] = original;
    // Divide by the step actually representable in double.
    const double numeric =
        static_cast<double>((loss_up - loss_down) / static_cast<long double>(up - down));
    const double denom = std::max({std::abs(analytic[k]), std::abs(numeric), 1e-8});
    const double rel = std::abs(analytic[k] - numeric) / denom;
    if (rel > report.max_relative_error || k == 0) {
      report.max_relative_error = rel;
      report.worst_index = k;
      report.worst_analytic = analytic[k];
      report.worst_numeric = numeric;
    }
  }
  if (!values.empty()) report.worst_parameter = params.parameter_name(report.worst_index);
  return report;
}

}  // namespace kdgene
