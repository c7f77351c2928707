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

#include "kdgene/interaction_cell.hpp"

#include <stdexcept>
#include <string>

namespace kdgene {

std::size_t gate_count(CellKind kind) {
  switch (kind) {
    case CellKind::lstm: return 4;
    case CellKind::gru: return 3;
    case CellKind::rnn: return 1;
  }
  return 0;
}

std::string_view gate_name(CellKind kind, std::size_t gate) {
  static constexpr std::string_view lstm[] = {"f", "i", "c~", "o"};
  static constexpr std::string_view gru[] = {"r", "z", "n"};
  switch (kind) {
    case CellKind::lstm: return lstm[gate];
    case CellKind::gru: return gru[gate];
    case CellKind::rnn: return "h";
  }
  return "?";
}

std::string_view to_string(CellKind kind) {
  switch (kind) {
    case CellKind::lstm: return "lstm";
    case CellKind::gru: return "gru";
    case CellKind::rnn: return "rnn";
  }
  return "?";
}

std::string_view to_string(OutputMode mode) {
  return mode == OutputMode::standard ? "standard" : "as_written";
}

CellKind parse_cell_kind(std::string_view s) {
  if (s == "lstm") return CellKind::lstm;
  if (s == "gru") return CellKind::gru;
  if (s == "rnn") return CellKind::rnn;
  throw std::invalid_argument("unknown cell kind '" + std::string(s) + "' (expected lstm, gru or rnn)");
}

OutputMode parse_output_mode(std::string_view s) {
  if (s == "standard") return OutputMode::standard;
  if (s == "as_written") return OutputMode::as_written;
  throw std::invalid_argument("unknown output mode '" + std::string(s) +
                              "' (expected standard or as_written)");
}

namespace {

// Given dL/d(preactivation) of gate g driven by (x, hidden_in): accumulate
// weight and bias gradients and propagate into dx and d_hidden_in.
void gate_backward(const CellWeights& w, const CellGradients& grads, std::size_t g,
                   std::span<const double> d_pre, std::span<const double> x,
                   std::span<const double> hidden_in, std::span<double> dx,
                   std::span<double> d_hidden_in) {
  const std::size_t H = w.hidden_dim;
  const std::size_t X = w.input_dim;
  auto wh = w.hidden_block(g);
  auto wx = w.input_block(g);
  auto gh = grads.hidden_block(g);
  auto gx = grads.input_block(g);
  auto gb = grads.bias_block(g);
  for (std::size_t a = 0; a < H; ++a) {
    const double d = d_pre[a];
    if (d == 0.0) continue;
    gb[a] += d;
    for (std::size_t b = 0; b < H; ++b) {
      gh[a * H + b] += d * hidden_in[b];
      d_hidden_in[b] += wh[a * H + b] * d;
    }
    for (std::size_t b = 0; b < X; ++b) {
      gx[a * X + b] += d * x[b];
      dx[b] += wx[a * X + b] * d;
    }
  }
}

}  // namespace

void interact_backward(const CellWeights& w, std::span<const double> relation,
                       std::span<const double> head, const CellTrace& trace,
                       std::span<const double> d_output, const CellGradients& grads,
                       std::span<double> d_relation, std::span<double> d_head) {
  const std::size_t H = w.hidden_dim;
  if (d_output.size() != H || head.size() != H || relation.size() != w.input_dim) {
    throw std::invalid_argument("interaction cell backward: shape mismatch");
  }
  auto act = [&](std::size_t g) { return std::span<const double>(trace.activations).subspan(g * H, H); };
  std::vector<double> d_pre(H);

  switch (w.kind) {
    case CellKind::lstm: {
      auto f = act(0);
      auto i = act(1);
      auto cand = act(2);
      auto o = act(3);
      std::vector<double> d_cell(H, 0.0);
      // output gate
      for (std::size_t a = 0; a < H; ++a) {
        const double d_o = (w.mode == OutputMode::standard) ? d_output[a] * trace.cell_tanh[a]
                                                             : d_output[a];
        d_pre[a] = d_o * o[a] * (1.0 - o[a]);
        if (w.mode == OutputMode::standard) {
          const double t = trace.cell_tanh[a];
          d_cell[a] = d_output[a] * o[a] * (1.0 - t * t);
        }
      }
      gate_backward(w, grads, 3, d_pre, relation, head, d_relation, d_head);
      if (w.mode == OutputMode::as_written) break;
      // c = f * c0 + i * c~ with c0 = 0, so the forget gate receives f' * (dc * c0) = 0.
      for (std::size_t a = 0; a < H; ++a) {
        const double c0 = 0.0;
        d_pre[a] = d_cell[a] * c0 * f[a] * (1.0 - f[a]);
      }
      gate_backward(w, grads, 0, d_pre, relation, head, d_relation, d_head);
      for (std::size_t a = 0; a < H; ++a) d_pre[a] = d_cell[a] * cand[a] * i[a] * (1.0 - i[a]);
      gate_backward(w, grads, 1, d_pre, relation, head, d_relation, d_head);
      for (std::size_t a = 0; a < H; ++a) {
        d_pre[a] = d_cell[a] * i[a] * (1.0 - cand[a] * cand[a]);
      }
      gate_backward(w, grads, 2, d_pre, relation, head, d_relation, d_head);
      break;
    }
    case CellKind::gru: {
      auto r = act(0);
      auto z = act(1);
      auto n = act(2);
      // h' = (1 - z) * n + z * h
      for (std::size_t a = 0; a < H; ++a) {
        d_head[a] += d_output[a] * z[a];
        d_pre[a] = d_output[a] * (1.0 - z[a]) * (1.0 - n[a] * n[a]);
      }
      std::vector<double> d_reset_hidden(H, 0.0);
      gate_backward(w, grads, 2, d_pre, relation, trace.reset_hidden, d_relation, d_reset_hidden);
      for (std::size_t a = 0; a < H; ++a) {
        d_head[a] += d_reset_hidden[a] * r[a];
        d_pre[a] = d_output[a] * (head[a] - n[a]) * z[a] * (1.0 - z[a]);
      }
      gate_backward(w, grads, 1, d_pre, relation, head, d_relation, d_head);
      for (std::size_t a = 0; a < H; ++a) {
        d_pre[a] = d_reset_hidden[a] * head[a] * r[a] * (1.0 - r[a]);
      }
      gate_backward(w, grads, 0, d_pre, relation, head, d_relation, d_head);
      break;
    }
    case CellKind::rnn: {
      auto y = act(0);
      for (std::size_t a = 0; a < H; ++a) d_pre[a] = d_output[a] * (1.0 - y[a] * y[a]);
      gate_backward(w, grads, 0, d_pre, relation, head, d_relation, d_head);
      break;
    }
  }
}

}  // namespace kdgene
