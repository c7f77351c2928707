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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace kdgene {

enum class CellKind : std::uint32_t { lstm = 0, gru = 1, rnn = 2 };

// How the LSTM cell emits the updated relation embedding:
//   standard    e_r' = o * tanh(c)
//   as_written  e_r' = o = sigmoid(W_oh e_h + W_ox e_r + b_o)
// GRU and RNN cells ignore the mode.
enum class OutputMode : std::uint32_t { standard = 0, as_written = 1 };

std::size_t gate_count(CellKind kind);
std::string_view gate_name(CellKind kind, std::size_t gate);
std::string_view to_string(CellKind kind);
std::string_view to_string(OutputMode mode);
CellKind parse_cell_kind(std::string_view s);
OutputMode parse_output_mode(std::string_view s);

// Gate order: lstm {f, i, c~, o}; gru {r, z, n}; rnn {h}.
// hidden: gates × H × H, input: gates × H × X, bias: gates × H, all row-major,
// where H is the entity dimension (hidden state = head embedding) and X the
// relation dimension (cell input = relation embedding).
template <class Span>
struct BasicCellWeights {
  CellKind kind = CellKind::lstm;
  OutputMode mode = OutputMode::standard;
  std::size_t hidden_dim = 0;
  std::size_t input_dim = 0;
  Span hidden;
  Span input;
  Span bias;

  std::size_t gates() const { return gate_count(kind); }
  auto hidden_block(std::size_t g) const { return hidden.subspan(g * hidden_dim * hidden_dim, hidden_dim * hidden_dim); }
  auto input_block(std::size_t g) const { return input.subspan(g * hidden_dim * input_dim, hidden_dim * input_dim); }
  auto bias_block(std::size_t g) const { return bias.subspan(g * hidden_dim, hidden_dim); }
};

using CellWeights = BasicCellWeights<std::span<const double>>;
using CellGradients = BasicCellWeights<std::span<double>>;

// Activations of one cell step, kept for the backward pass.
template <class Real>
struct BasicCellTrace {
  std::vector<Real> activations;   // gates × H, post-nonlinearity
  std::vector<Real> cell_state;    // lstm: c = f * c0 + i * c~ with c0 = 0
  std::vector<Real> cell_tanh;     // lstm: tanh(c)
  std::vector<Real> reset_hidden;  // gru: r * h
  std::vector<Real> output;        // e_r', length H
};
using CellTrace = BasicCellTrace<double>;

template <class Real>
Real sigmoid(Real a) {
  if (a >= Real(0)) return Real(1) / (Real(1) + std::exp(-a));
  const Real e = std::exp(a);
  return e / (Real(1) + e);
}

namespace detail {
// out += W x for W (rows × cols) row-major.
template <class Real>
void add_matvec(std::span<const double> w, std::size_t rows, std::size_t cols,
                std::span<const Real> x, std::span<Real> out) {
  for (std::size_t a = 0; a < rows; ++a) {
    Real acc = Real(0);
    const double* row = w.data() + a * cols;
    for (std::size_t b = 0; b < cols; ++b) acc += static_cast<Real>(row[b]) * x[b];
    out[a] += acc;
  }
}
}  // namespace detail

// One cell step with the relation embedding as input and the head embedding
// as the previous hidden state. Generic over the arithmetic type so the
// gradient checker can evaluate it in extended precision.
template <class Real>
void interact(const CellWeights& w, std::span<const Real> relation, std::span<const Real> head,
              BasicCellTrace<Real>& trace) {
  const std::size_t H = w.hidden_dim;
  const std::size_t X = w.input_dim;
  const std::size_t G = w.gates();
  trace.activations.assign(G * H, Real(0));
  trace.output.assign(H, Real(0));
  auto pre = [&](std::size_t g) { return std::span<Real>(trace.activations).subspan(g * H, H); };

  auto preact = [&](std::size_t g, std::span<const Real> hidden_in) {
    auto out = pre(g);
    auto b = w.bias_block(g);
    for (std::size_t a = 0; a < H; ++a) out[a] = static_cast<Real>(b[a]);
    detail::add_matvec<Real>(w.input_block(g), H, X, relation, out);
    detail::add_matvec<Real>(w.hidden_block(g), H, H, hidden_in, out);
    return out;
  };

  switch (w.kind) {
    case CellKind::lstm: {
      for (std::size_t g = 0; g < 4; ++g) {
        auto a = preact(g, head);
        for (auto& v : a) v = (g == 2) ? std::tanh(v) : sigmoid(v);
      }
      auto f = pre(0);
      auto i = pre(1);
      auto cand = pre(2);
      auto o = pre(3);
      trace.cell_state.assign(H, Real(0));
      trace.cell_tanh.assign(H, Real(0));
      for (std::size_t a = 0; a < H; ++a) {
        const Real c0 = Real(0);
        trace.cell_state[a] = f[a] * c0 + i[a] * cand[a];
        trace.cell_tanh[a] = std::tanh(trace.cell_state[a]);
        trace.output[a] = (w.mode == OutputMode::standard) ? o[a] * trace.cell_tanh[a] : o[a];
      }
      break;
    }
    case CellKind::gru: {
      // r = s(W_rh h + W_rx x + b_r), z = s(W_zh h + W_zx x + b_z),
      // n = tanh(W_nh (r*h) + W_nx x + b_n), h' = (1 - z) * n + z * h
      for (std::size_t g = 0; g < 2; ++g) {
        auto a = preact(g, head);
        for (auto& v : a) v = sigmoid(v);
      }
      auto r = pre(0);
      auto z = pre(1);
      trace.reset_hidden.assign(H, Real(0));
      for (std::size_t a = 0; a < H; ++a) trace.reset_hidden[a] = r[a] * head[a];
      auto n = preact(2, std::span<const Real>(trace.reset_hidden));
      for (auto& v : n) v = std::tanh(v);
      for (std::size_t a = 0; a < H; ++a) {
        trace.output[a] = (Real(1) - z[a]) * n[a] + z[a] * head[a];
      }
      break;
    }
    case CellKind::rnn: {
      auto a = preact(0, head);
      for (std::size_t k = 0; k < H; ++k) {
        a[k] = std::tanh(a[k]);
        trace.output[k] = a[k];
      }
      break;
    }
  }
}

// Accumulates gradients of a downstream loss: d_output is dL/de_r'. Adds into
// grads, d_relation and d_head.
void interact_backward(const CellWeights& w, std::span<const double> relation,
                       std::span<const double> head, const CellTrace& trace,
                       std::span<const double> d_output, const CellGradients& grads,
                       std::span<double> d_relation, std::span<double> d_head);

}  // namespace kdgene
