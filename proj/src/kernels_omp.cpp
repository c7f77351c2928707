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

#include <algorithm>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kdgene::kernels {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, threads));
#else
  (void)threads;
#endif
}

namespace parallel {

namespace {
constexpr std::int64_t kColumnBlock = 16;
}

void score_rows(std::span<const double> table, std::size_t dim, std::span<const double> query,
                std::span<double> out) {
  const auto rows = static_cast<std::int64_t>(out.size());
  const double* t = table.data();
  const double* q = query.data();
  double* o = out.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < rows; ++j) {
    const double* row = t + j * static_cast<std::int64_t>(dim);
    double acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) acc += row[c] * q[c];
    o[j] = acc;
  }
}

void add_outer(std::span<double> grad, std::size_t dim, std::span<const double> coeff,
               std::span<const double> query) {
  const auto rows = static_cast<std::int64_t>(coeff.size());
  double* g = grad.data();
  const double* w = coeff.data();
  const double* q = query.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < rows; ++j) {
    if (w[j] == 0.0) continue;
    double* row = g + j * static_cast<std::int64_t>(dim);
    for (std::size_t c = 0; c < dim; ++c) row[c] += w[j] * q[c];
  }
}

void weighted_row_sum(std::span<const double> table, std::size_t dim,
                      std::span<const double> coeff, std::span<double> out) {
  // Columns are split across threads; each column still sums rows in order.
  const std::size_t rows = coeff.size();
  const auto blocks = static_cast<std::int64_t>((dim + kColumnBlock - 1) / kColumnBlock);
  const double* t = table.data();
  const double* w = coeff.data();
  double* o = out.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b * kColumnBlock);
    const std::size_t end = std::min(dim, begin + static_cast<std::size_t>(kColumnBlock));
    for (std::size_t c = begin; c < end; ++c) o[c] = 0.0;
    for (std::size_t j = 0; j < rows; ++j) {
      const double* row = t + j * dim;
      for (std::size_t c = begin; c < end; ++c) o[c] += w[j] * row[c];
    }
  }
}

}  // namespace parallel
}  // namespace kdgene::kernels
