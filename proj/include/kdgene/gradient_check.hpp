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

#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "kdgene/model.hpp"

namespace kdgene {

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  std::string worst_parameter;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t parameters_checked = 0;
};

// Loss of the batch evaluated by a separate forward-only path in extended
// precision. Shares no code with loss_batch apart from the cell forward step.
long double reference_loss(const ModelParams& params, std::span<const Triple> batch, double lambda);

// Central differences (L(θ+δ) − L(θ−δ)) / 2δ for every parameter against the
// analytic gradient of loss_batch. Relative error uses
// max(|analytic|, |numeric|, 1e-8) as denominator.
GradCheckReport gradient_check(const ModelParams& params, std::span<const Triple> batch,
                               double lambda, double step = 1e-6);

}  // namespace kdgene
