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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kdgene/interaction_cell.hpp"
#include "kdgene/kernels.hpp"
#include "kdgene/types.hpp"

namespace kdgene {

// cp: separate head and tail tables, e_r' = e_r.
// distmult: one entity table read for heads and tails, e_r' = e_r.
// kdgene: one entity table, e_r' produced by the interaction cell.
enum class ScorerKind : std::uint32_t { cp = 0, distmult = 1, kdgene = 2 };

std::string_view to_string(ScorerKind kind);
ScorerKind parse_scorer_kind(std::string_view s);

inline constexpr double kInitScale = 0.01;

struct ModelShape {
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;
  std::size_t entity_dim = 0;
  std::size_t relation_dim = 0;
  ScorerKind scorer = ScorerKind::kdgene;
  CellKind cell = CellKind::lstm;
  OutputMode output_mode = OutputMode::standard;

  bool has_cell() const { return scorer == ScorerKind::kdgene; }
  bool separate_tail_table() const { return scorer == ScorerKind::cp; }
  std::size_t gates() const { return has_cell() ? gate_count(cell) : 0; }
  // Throws ConfigError on zero dimensions or d_r != d_e without a cell.
  void validate() const;

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

// Offsets of each block inside the flat parameter vector. The order matches
// the checkpoint payload: entity table, tail table (cp only), relation table,
// hidden-side gate weights, input-side gate weights, biases.
struct ParamLayout {
  std::size_t entity = 0;
  std::size_t tail = 0;
  std::size_t relation = 0;
  std::size_t cell_hidden = 0;
  std::size_t cell_input = 0;
  std::size_t cell_bias = 0;
  std::size_t total = 0;

  ParamLayout() = default;
  explicit ParamLayout(const ModelShape& shape);
};

class ModelParams {
 public:
  ModelParams() = default;
  explicit ModelParams(const ModelShape& shape);  // zero-filled

  const ModelShape& shape() const { return shape_; }
  const ParamLayout& layout() const { return layout_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::span<const double> head_row(EntityId e) const;
  std::span<const double> tail_row(EntityId e) const;
  std::span<const double> relation_row(RelationId r) const;
  std::span<double> head_row(EntityId e);
  std::span<double> tail_row(EntityId e);
  std::span<double> relation_row(RelationId r);
  // Whole table that tails are scored against, |E| × d_e.
  std::span<const double> tail_table() const;

  CellWeights cell() const;
  // Gradient view with this model's layout over a buffer of size().
  CellGradients cell_view(std::span<double> flat) const;

  // Human-readable name for a flat index, e.g. "entity[3][1]" or "W_oh[2][0]".
  std::string parameter_name(std::size_t flat) const;
  bool all_finite() const;

  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.shape_ == b.shape_ && a.values_ == b.values_;
  }

 private:
  ModelShape shape_;
  ParamLayout layout_;
  std::vector<double> values_;
};

// Every parameter i.i.d. uniform on [-scale, scale], deterministic in seed.
ModelParams init_params(const ModelShape& shape, std::uint64_t seed, double scale = kInitScale);

// e_r' for (h, r): the cell output for kdgene, e_r otherwise. Fills `trace`
// when given and the model has a cell.
void relation_update(const ModelParams& params, EntityId h, RelationId r, std::span<double> out,
                     CellTrace* trace = nullptr);

double score_triple(const ModelParams& params, EntityId h, RelationId r, EntityId t);

// out[j] = score_triple(params, h, r, j) for every entity j, computed as
// tail_table · (e_h ∘ e_r').
void score_all_tails(const ModelParams& params, EntityId h, RelationId r, std::span<double> out,
                     kernels::Execution exec = kernels::Execution::serial);

}  // namespace kdgene
