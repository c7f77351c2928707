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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kdgene/model.hpp"
#include "kdgene/triple_store.hpp"

namespace kdgene {

struct TrainConfig {
  ScorerKind model = ScorerKind::kdgene;
  CellKind cell = CellKind::lstm;
  OutputMode output_mode = OutputMode::standard;
  std::size_t batch_size = 128;
  double learning_rate = 0.05;
  double reg_lambda = 0.01;
  int epochs = 50;
  std::size_t d_e = 64;
  std::size_t d_r = 32;
  std::uint64_t seed = 0;

  // Throws ConfigError when an invariant is violated.
  void validate() const;
  ModelShape shape(std::size_t num_entities, std::size_t num_relations) const;
};

// Flat key=value file; '#' starts a comment. Keys are exactly the field names.
std::span<const std::string_view> config_keys();
void apply_config_setting(TrainConfig& cfg, std::string_view key, std::string_view value);
TrainConfig parse_config(std::istream& in, TrainConfig base = {});
std::string format_config(const TrainConfig& cfg);
// Non-fatal notes, e.g. a regularization weight off the usual grid.
std::vector<std::string> config_warnings(const TrainConfig& cfg);

// Scratch buffers reused across triples.
struct LossWorkspace {
  std::vector<double> scores;
  std::vector<double> updated;   // e_r'
  std::vector<double> query;     // e_h ∘ e_r'
  std::vector<double> d_query;
  std::vector<double> d_updated;
  std::vector<double> d_head;
  std::vector<double> d_relation;
  CellTrace trace;
};

// Sum over the batch of  -φ(h,r,t) + log Σ_t' exp φ(h,r,t')
//                        + λ (‖e_h‖₃³ + ‖e_r'‖₃³ + ‖e_t‖₃³).
// When `grads` is non-empty it must have params.size() entries; it is
// overwritten with the exact gradient. Throws NumericError on a non-finite
// loss.
double loss_batch(const ModelParams& params, std::span<const Triple> batch, double lambda,
                  std::span<double> grads,
                  kernels::Execution exec = kernels::Execution::serial,
                  LossWorkspace* workspace = nullptr);

struct AdagradState {
  explicit AdagradState(std::size_t n, double eps = 1e-10) : accumulator(n, 0.0), epsilon(eps) {}
  std::vector<double> accumulator;
  double epsilon;
};

// acc += g²;  θ -= lr · g / (√acc + ε). Entries with zero gradient are left
// untouched, which restricts the update to rows the batch reached.
void adagrad_step(std::span<double> params, std::span<const double> grads, AdagradState& state,
                  double learning_rate);

struct EpochRecord {
  int epoch = 0;
  double mean_loss = 0.0;
  double wall_seconds = 0.0;
};

struct TrainHooks {
  std::function<void(const EpochRecord&)> progress;
  // Called after each epoch; inert unless set (e.g. validation HR).
  std::function<void(int epoch, const ModelParams&)> on_epoch_end;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochRecord> history;
  std::size_t steps = 0;
  bool aborted = false;   // non-finite loss or gradient; params are the last finite state
  std::string diagnostic;
};

// `store` must already contain reciprocal relations.
TrainResult train(const TripleStore& store, const TrainConfig& config, const TrainHooks& hooks = {},
                  kernels::Execution exec = kernels::Execution::serial);

// Training log CSV: epoch,mean_loss,wall_seconds
void write_training_log(std::ostream& out, std::span<const EpochRecord> history);

}  // namespace kdgene
