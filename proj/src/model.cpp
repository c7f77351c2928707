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

#include "kdgene/model.hpp"

#include <cmath>
#include <stdexcept>

#include "kdgene/random.hpp"

namespace kdgene {

std::string_view to_string(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::cp: return "cp";
    case ScorerKind::distmult: return "distmult";
    case ScorerKind::kdgene: return "kdgene";
  }
  return "?";
}

ScorerKind parse_scorer_kind(std::string_view s) {
  if (s == "cp") return ScorerKind::cp;
  if (s == "distmult") return ScorerKind::distmult;
  if (s == "kdgene") return ScorerKind::kdgene;
  throw std::invalid_argument("unknown model '" + std::string(s) + "' (expected cp, distmult or kdgene)");
}

void ModelShape::validate() const {
  if (num_entities == 0 || num_relations == 0 || entity_dim == 0 || relation_dim == 0) {
    throw ConfigError("model dimensions must be positive");
  }
  if (!has_cell() && relation_dim != entity_dim) {
    throw ConfigError(std::string(to_string(scorer)) + " requires d_r == d_e");
  }
}

ParamLayout::ParamLayout(const ModelShape& s) {
  const std::size_t H = s.entity_dim;
  const std::size_t X = s.relation_dim;
  const std::size_t G = s.gates();
  entity = 0;
  std::size_t next = s.num_entities * H;
  tail = entity;
  if (s.separate_tail_table()) {
    tail = next;
    next += s.num_entities * H;
  }
  relation = next;
  next += s.num_relations * X;
  cell_hidden = next;
  next += G * H * H;
  cell_input = next;
  next += G * H * X;
  cell_bias = next;
  next += G * H;
  total = next;
}

ModelParams::ModelParams(const ModelShape& shape)
    : shape_(shape), layout_(shape), values_(layout_.total, 0.0) {
  shape_.validate();
}

std::span<const double> ModelParams::head_row(EntityId e) const {
  return std::span<const double>(values_).subspan(layout_.entity + index(e) * shape_.entity_dim,
                                                  shape_.entity_dim);
}
std::span<const double> ModelParams::tail_row(EntityId e) const {
  return std::span<const double>(values_).subspan(layout_.tail + index(e) * shape_.entity_dim,
                                                  shape_.entity_dim);
}
std::span<const double> ModelParams::relation_row(RelationId r) const {
  return std::span<const double>(values_).subspan(layout_.relation + index(r) * shape_.relation_dim,
                                                  shape_.relation_dim);
}
std::span<double> ModelParams::head_row(EntityId e) {
  return std::span<double>(values_).subspan(layout_.entity + index(e) * shape_.entity_dim,
                                            shape_.entity_dim);
}
std::span<double> ModelParams::tail_row(EntityId e) {
  return std::span<double>(values_).subspan(layout_.tail + index(e) * shape_.entity_dim,
                                            shape_.entity_dim);
}
std::span<double> ModelParams::relation_row(RelationId r) {
  return std::span<double>(values_).subspan(layout_.relation + index(r) * shape_.relation_dim,
                                            shape_.relation_dim);
}

std::span<const double> ModelParams::tail_table() const {
  return std::span<const double>(values_).subspan(layout_.tail,
                                                  shape_.num_entities * shape_.entity_dim);
}

namespace {
template <class Span>
BasicCellWeights<Span> make_cell_view(const ModelShape& s, const ParamLayout& l, Span flat) {
  BasicCellWeights<Span> w;
  w.kind = s.cell;
  w.mode = s.output_mode;
  w.hidden_dim = s.entity_dim;
  w.input_dim = s.relation_dim;
  const std::size_t G = s.gates();
  w.hidden = flat.subspan(l.cell_hidden, G * s.entity_dim * s.entity_dim);
  w.input = flat.subspan(l.cell_input, G * s.entity_dim * s.relation_dim);
  w.bias = flat.subspan(l.cell_bias, G * s.entity_dim);
  return w;
}
}  // namespace

CellWeights ModelParams::cell() const {
  if (!shape_.has_cell()) throw std::logic_error("model has no interaction cell");
  return make_cell_view(shape_, layout_, std::span<const double>(values_));
}

CellGradients ModelParams::cell_view(std::span<double> flat) const {
  if (!shape_.has_cell()) throw std::logic_error("model has no interaction cell");
  if (flat.size() != values_.size()) throw std::invalid_argument("gradient buffer size mismatch");
  return make_cell_view(shape_, layout_, flat);
}

std::string ModelParams::parameter_name(std::size_t i) const {
  const std::size_t H = shape_.entity_dim;
  const std::size_t X = shape_.relation_dim;
  auto two = [](std::string base, std::size_t a, std::size_t b) {
    return base + "[" + std::to_string(a) + "][" + std::to_string(b) + "]";
  };
  if (i >= layout_.total) throw std::out_of_range("parameter index out of range");
  if (i < layout_.relation) {
    if (shape_.separate_tail_table() && i >= layout_.tail) {
      const std::size_t k = i - layout_.tail;
      return two("tail", k / H, k % H);
    }
    return two("entity", i / H, i % H);
  }
  if (i < layout_.cell_hidden) {
    const std::size_t k = i - layout_.relation;
    return two("relation", k / X, k % X);
  }
  if (i < layout_.cell_input) {
    const std::size_t k = i - layout_.cell_hidden;
    const std::size_t g = k / (H * H);
    const std::size_t rem = k % (H * H);
    return two("W_" + std::string(gate_name(shape_.cell, g)) + "h", rem / H, rem % H);
  }
  if (i < layout_.cell_bias) {
    const std::size_t k = i - layout_.cell_input;
    const std::size_t g = k / (H * X);
    const std::size_t rem = k % (H * X);
    return two("W_" + std::string(gate_name(shape_.cell, g)) + "x", rem / X, rem % X);
  }
  const std::size_t k = i - layout_.cell_bias;
  return "b_" + std::string(gate_name(shape_.cell, k / H)) + "[" + std::to_string(k % H) + "]";
}

bool ModelParams::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

ModelParams init_params(const ModelShape& shape, std::uint64_t seed, double scale) {
  ModelParams params(shape);
  std::mt19937_64 rng(derive_seed(seed, "init"));
  for (double& v : params.values()) v = uniform_real(rng, -scale, scale);
  return params;
}

void relation_update(const ModelParams& params, EntityId h, RelationId r, std::span<double> out,
                     CellTrace* trace) {
  const auto& s = params.shape();
  if (index(h) >= s.num_entities || index(r) >= s.num_relations) {
    throw std::out_of_range("entity or relation id out of range");
  }
  auto rel = params.relation_row(r);
  if (!s.has_cell()) {
    std::copy(rel.begin(), rel.end(), out.begin());
    return;
  }
  CellTrace local;
  CellTrace& tr = trace ? *trace : local;
  interact<double>(params.cell(), rel, params.head_row(h), tr);
  std::copy(tr.output.begin(), tr.output.end(), out.begin());
}

double score_triple(const ModelParams& params, EntityId h, RelationId r, EntityId t) {
  if (index(t) >= params.shape().num_entities) throw std::out_of_range("tail id out of range");
  std::vector<double> updated(params.shape().entity_dim);
  relation_update(params, h, r, updated);
  auto eh = params.head_row(h);
  auto et = params.tail_row(t);
  double acc = 0.0;
  for (std::size_t i = 0; i < updated.size(); ++i) acc += eh[i] * updated[i] * et[i];
  return acc;
}

void score_all_tails(const ModelParams& params, EntityId h, RelationId r, std::span<double> out,
                     kernels::Execution exec) {
  const auto& s = params.shape();
  if (out.size() != s.num_entities) throw std::invalid_argument("score buffer must have |E| entries");
  std::vector<double> query(s.entity_dim);
  relation_update(params, h, r, query);
  auto eh = params.head_row(h);
  for (std::size_t i = 0; i < query.size(); ++i) query[i] *= eh[i];
  kernels::score_rows(exec, params.tail_table(), s.entity_dim, query, out);
}

}  // namespace kdgene
