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

namespace kdgene::kernels {

// Dense kernels over an entity table stored row-major (rows × dim).
// `serial` is the reference; `parallel` splits work with OpenMP so that each
// output element is still reduced in the same order as the serial loop.
enum class Execution { serial, parallel };

namespace serial {
// out[j] = sum_c table[j][c] * query[c]
void score_rows(std::span<const double> table, std::size_t dim, std::span<const double> query,
                std::span<double> out);
// grad[j][c] += coeff[j] * query[c]
void add_outer(std::span<double> grad, std::size_t dim, std::span<const double> coeff,
               std::span<const double> query);
// out[c] = sum_j coeff[j] * table[j][c]
void weighted_row_sum(std::span<const double> table, std::size_t dim,
                      std::span<const double> coeff, std::span<double> out);
}  // namespace serial

namespace parallel {
void score_rows(std::span<const double> table, std::size_t dim, std::span<const double> query,
                std::span<double> out);
void add_outer(std::span<double> grad, std::size_t dim, std::span<const double> coeff,
               std::span<const double> query);
void weighted_row_sum(std::span<const double> table, std::size_t dim,
                      std::span<const double> coeff, std::span<double> out);
}  // namespace parallel

inline void score_rows(Execution exec, std::span<const double> table, std::size_t dim,
                       std::span<const double> query, std::span<double> out) {
  exec == Execution::serial ? serial::score_rows(table, dim, query, out)
                            : parallel::score_rows(table, dim, query, out);
}

inline void add_outer(Execution exec, std::span<double> grad, std::size_t dim,
                      std::span<const double> coeff, std::span<const double> query) {
  exec == Execution::serial ? serial::add_outer(grad, dim, coeff, query)
                            : parallel::add_outer(grad, dim, coeff, query);
}

inline void weighted_row_sum(Execution exec, std::span<const double> table, std::size_t dim,
                             std::span<const double> coeff, std::span<double> out) {
  exec == Execution::serial ? serial::weighted_row_sum(table, dim, coeff, out)
                            : parallel::weighted_row_sum(table, dim, coeff, out);
}

// Number of OpenMP threads in use (1 when built without OpenMP).
int thread_count();
void set_thread_count(int threads);

}  // namespace kdgene::kernels
