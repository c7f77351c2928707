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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kdgene/kernels.hpp"
#include "kdgene/random.hpp"
#include "kdgene/trainer.hpp"

using namespace kdgene;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = uniform_real(rng, -1, 1);
  return v;
}

kernels::Execution exec_of(const benchmark::State& state) {
  return state.range(1) ? kernels::Execution::parallel : kernels::Execution::serial;
}

void BM_ScoreRows(benchmark::State& state) {
  const std::size_t rows = static_cast<std::size_t>(state.range(0)), dim = 256;
  auto table = random_vec(rows * dim, 1);
  auto query = random_vec(dim, 2);
  std::vector<double> out(rows);
  for (auto _ : state) {
    kernels::score_rows(exec_of(state), table, dim, query, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * rows * dim));
}

void BM_AddOuter(benchmark::State& state) {
  const std::size_t rows = static_cast<std::size_t>(state.range(0)), dim = 256;
  std::vector<double> grad(rows * dim, 0.0);
  auto coeff = random_vec(rows, 3);
  auto query = random_vec(dim, 4);
  for (auto _ : state) {
    kernels::add_outer(exec_of(state), grad, dim, coeff, query);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * rows * dim));
}

void BM_WeightedRowSum(benchmark::State& state) {
  const std::size_t rows = static_cast<std::size_t>(state.range(0)), dim = 256;
  auto table = random_vec(rows * dim, 5);
  auto coeff = random_vec(rows, 6);
  std::vector<double> out(dim);
  for (auto _ : state) {
    kernels::weighted_row_sum(exec_of(state), table, dim, coeff, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * rows * dim));
}

void BM_LossBatch(benchmark::State& state) {
  ModelShape s;
  s.num_entities = static_cast<std::size_t>(state.range(0));
  s.num_relations = 10;
  s.entity_dim = 64;
  s.relation_dim = 32;
  auto params = init_params(s, 7, 0.1);
  std::mt19937_64 rng(8);
  std::vector<Triple> batch;
  for (int i = 0; i < 128; ++i)
    batch.push_back({entity_id(uniform_index(rng, s.num_entities)), relation_id(uniform_index(rng, 10)),
                     entity_id(uniform_index(rng, s.num_entities))});
  std::vector<double> grads(params.size());
  LossWorkspace ws;
  for (auto _ : state) benchmark::DoNotOptimize(loss_batch(params, batch, 0.01, grads, exec_of(state), &ws));
}

void kernel_args(benchmark::internal::Benchmark* b) {
  for (int rows : {1000, 10000, 50000})
    for (int par : {0, 1}) b->Args({rows, par});
  b->ArgNames({"rows", "parallel"});
}

}  // namespace

BENCHMARK(BM_ScoreRows)->Apply(kernel_args);
BENCHMARK(BM_AddOuter)->Apply(kernel_args);
BENCHMARK(BM_WeightedRowSum)->Apply(kernel_args);
BENCHMARK(BM_LossBatch)->Args({5000, 0})->Args({5000, 1})->ArgNames({"entities", "parallel"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
