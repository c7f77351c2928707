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

#include "kdgene/kernels.hpp"

namespace kdgene::kernels::serial {

void score_rows(std::span<const double> table, std::size_t dim, std::span<const double> query,
                std::span<double> out) {
  const std::size_t rows = out.size();
  for (std::size_t j = 0; j < rows; ++j) {
    const double* row = table.data() + j * dim;
    double acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) acc += row[c] * query[c];
    out[j] = acc;
  }
}

void add_outer(std::span<double> grad, std::size_t dim, std::span<const double> coeff,
               std::span<const double> query) {
  const std::size_t rows = coeff.size();
  for (std::size_t j = 0; j < rows; ++j) {
    const double w = coeff[j];
    if (w == 0.0) continue;
    double* row = grad.data() + j * dim;
    for (std::size_t c = 0; c < dim; ++c) row[c] += w * query[c];
  }
}

void weighted_row_sum(std::span<const double> table, std::size_t dim,
                      std::span<const double> coeff, std::span<double> out) {
  for (std::size_t c = 0; c < dim; ++c) out[c] = 0.0;
  const std::size_t rows = coeff.size();
  for (std::size_t j = 0; j < rows; ++j) {
    const double w = coeff[j];
    const double* row = table.data() + j * dim;
    for (std::size_t c = 0; c < dim; ++c) out[c] += w * row[c];
  }
}

}  // namespace kdgene::kernels::serial
