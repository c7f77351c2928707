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

#include "kdgene/trainer.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "kdgene/random.hpp"

namespace kdgene {

namespace {

constexpr std::array<std::string_view, 10> kConfigKeys = {
    "model", "cell", "output_mode", "batch_size", "learning_rate",
    "reg_lambda", "epochs", "d_e", "d_r", "seed"};

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for key " + std::string(key));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(reg_lambda >= 0.0)) throw ConfigError("reg_lambda must be >= 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (d_e == 0 || d_r == 0) throw ConfigError("d_e and d_r must be positive");
}

ModelShape TrainConfig::shape(std::size_t num_entities, std::size_t num_relations) const {
  ModelShape s;
  s.num_entities = num_entities;
  s.num_relations = num_relations;
  s.entity_dim = d_e;
  s.relation_dim = model == ScorerKind::kdgene ? d_r : d_e;
  s.scorer = model;
  s.cell = cell;
  s.output_mode = output_mode;
  return s;
}

std::span<const std::string_view> config_keys() { return kConfigKeys; }

void apply_config_setting(TrainConfig& cfg, std::string_view key, std::string_view value) {
  try {
    if (key == "model") cfg.model = parse_scorer_kind(value);
    else if (key == "cell") cfg.cell = parse_cell_kind(value);
    else if (key == "output_mode") cfg.output_mode = parse_output_mode(value);
    else if (key == "batch_size") cfg.batch_size = parse_number<std::size_t>(key, value);
    else if (key == "learning_rate") cfg.learning_rate = parse_number<double>(key, value);
    else if (key == "reg_lambda") cfg.reg_lambda = parse_number<double>(key, value);
    else if (key == "epochs") cfg.epochs = parse_number<int>(key, value);
    else if (key == "d_e") cfg.d_e = parse_number<std::size_t>(key, value);
    else if (key == "d_r") cfg.d_r = parse_number<std::size_t>(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else {
      std::string valid;
      for (auto k : kConfigKeys) valid += (valid.empty() ? "" : ", ") + std::string(k);
      throw ConfigError("unknown config key '" + std::string(key) + "'; valid keys: " + valid);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

TrainConfig parse_config(std::istream& in, TrainConfig cfg) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_config_setting(cfg, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  return cfg;
}

std::string format_config(const TrainConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "model=" << to_string(c.model) << '\n'
      << "cell=" << to_string(c.cell) << '\n'
      << "output_mode=" << to_string(c.output_mode) << '\n'
      << "batch_size=" << c.batch_size << '\n'
      << "learning_rate=" << c.learning_rate << '\n'
      << "reg_lambda=" << c.reg_lambda << '\n'
      << "epochs=" << c.epochs << '\n'
      << "d_e=" << c.d_e << '\n'
      << "d_r=" << c.d_r << '\n'
      << "seed=" << c.seed << '\n';
  return out.str();
}

std::vector<std::string> config_warnings(const TrainConfig& c) {
  std::vector<std::string> out;
  static constexpr double kLambdaGrid[] = {0.001, 0.01, 0.05, 0.1, 0.2, 0.5};
  static constexpr double kLrGrid[] = {0.01, 0.03, 0.05, 0.1};
  static constexpr std::size_t kBatchGrid[] = {128, 256, 512, 1024};
  auto on_grid = [](double v, std::span<const double> grid) {
    return std::any_of(grid.begin(), grid.end(), [&](double g) { return std::abs(g - v) <= 1e-12 * g; });
  };
  if (!on_grid(c.reg_lambda, kLambdaGrid)) {
    out.push_back("reg_lambda=" + std::to_string(c.reg_lambda) +
                  " is outside the usual grid {0.001, 0.01, 0.05, 0.1, 0.2, 0.5}");
  }
  if (!on_grid(c.learning_rate, kLrGrid)) {
    out.push_back("learning_rate=" + std::to_string(c.learning_rate) +
                  " is outside the usual grid {0.01, 0.03, 0.05, 0.1}");
  }
  if (std::find(std::begin(kBatchGrid), std::end(kBatchGrid), c.batch_size) == std::end(kBatchGrid)) {
    out.push_back("batch_size=" + std::to_string(c.batch_size) +
                  " is outside the usual grid {128, 256, 512, 1024}");
  }
  if (c.model != ScorerKind::kdgene && c.d_r != c.d_e) {
    out.push_back("d_r is ignored for " + std::string(to_string(c.model)) + " (relation dim = d_e)");
  }
  return out;
}

double loss_batch(const ModelParams& params, std::span<const Triple> batch, double lambda,
                  std::span<double> grads, kernels::Execution exec, LossWorkspace* workspace) {
  const ModelShape& s = params.shape();
  const std::size_t N = s.num_entities;
  const std::size_t H = s.entity_dim;
  const std::size_t X = s.relation_dim;
  const bool want_grad = !grads.empty();
  if (want_grad && grads.size() != params.size()) {
    throw std::invalid_argument("gradient buffer must match the parameter count");
  }
  LossWorkspace local;
  LossWorkspace& ws = workspace ? *workspace : local;
  ws.scores.resize(N);
  ws.updated.resize(H);
  ws.query.resize(H);
  ws.d_query.resize(H);
  ws.d_updated.resize(H);
  ws.d_head.resize(H);
  ws.d_relation.resize(X);

  if (want_grad) std::fill(grads.begin(), grads.end(), 0.0);
  const ParamLayout& layout = params.layout();
  std::optional<CellGradients> cell_grads;
  if (want_grad && s.has_cell()) cell_grads = params.cell_view(grads);
  auto cube = [](double x) { return std::abs(x) * x * x; };
  auto d_cube = [](double x) { return 3.0 * x * std::abs(x); };

  double total = 0.0;
  for (const Triple& tr : batch) {
    if (index(tr.head) >= N || index(tr.tail) >= N || index(tr.relation) >= s.num_relations) {
      throw std::out_of_range("triple id out of range for this model");
    }
    auto head = params.head_row(tr.head);
    auto rel = params.relation_row(tr.relation);
    auto tail = params.tail_row(tr.tail);
    relation_update(params, tr.head, tr.relation, ws.updated, s.has_cell() ? &ws.trace : nullptr);
    for (std::size_t i = 0; i < H; ++i) ws.query[i] = head[i] * ws.updated[i];
    kernels::score_rows(exec, params.tail_table(), H, ws.query, ws.scores);

    const double top = *std::max_element(ws.scores.begin(), ws.scores.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < N; ++j) sum += std::exp(ws.scores[j] - top);
    const double lse = top + std::log(sum);
    double reg = 0.0;
    for (std::size_t i = 0; i < H; ++i) reg += cube(head[i]) + cube(ws.updated[i]) + cube(tail[i]);
    const double loss = -ws.scores[index(tr.tail)] + lse + lambda * reg;
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite loss " + std::to_string(loss) + " for triple (" +
                         std::to_string(index(tr.head)) + ", " + std::to_string(index(tr.relation)) +
                         ", " + std::to_string(index(tr.tail)) + ")");
    }
    total += loss;
    if (!want_grad) continue;

    // dL/dscore = softmax - onehot(t); reuse the score buffer.
    for (std::size_t j = 0; j < N; ++j) ws.scores[j] = std::exp(ws.scores[j] - top) / sum;
    ws.scores[index(tr.tail)] -= 1.0;

    std::span<double> tail_grads = grads.subspan(layout.tail, N * H);
    kernels::weighted_row_sum(exec, params.tail_table(), H, ws.scores, ws.d_query);
    kernels::add_outer(exec, tail_grads, H, ws.scores, ws.query);

    double* gt = tail_grads.data() + index(tr.tail) * H;
    for (std::size_t i = 0; i < H; ++i) {
      gt[i] += lambda * d_cube(tail[i]);
      ws.d_head[i] = ws.d_query[i] * ws.updated[i] + lambda * d_cube(head[i]);
      ws.d_updated[i] = ws.d_query[i] * head[i] + lambda * d_cube(ws.updated[i]);
    }
    if (s.has_cell()) {
      std::fill(ws.d_relation.begin(), ws.d_relation.end(), 0.0);
      interact_backward(params.cell(), rel, head, ws.trace, ws.d_updated, *cell_grads, ws.d_relation,
                        ws.d_head);
    } else {
      std::copy(ws.d_updated.begin(), ws.d_updated.end(), ws.d_relation.begin());
    }
    double* gh = grads.data() + layout.entity + index(tr.head) * H;
    double* gr = grads.data() + layout.relation + index(tr.relation) * X;
    for (std::size_t i = 0; i < H; ++i) gh[i] += ws.d_head[i];
    for (std::size_t i = 0; i < X; ++i) gr[i] += ws.d_relation[i];
  }
  return total;
}

void adagrad_step(std::span<double> params, std::span<const double> grads, AdagradState& state,
                  double learning_rate) {
  if (params.size() != grads.size() || params.size() != state.accumulator.size()) {
    throw std::invalid_argument("adagrad: shape mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    if (g == 0.0) continue;
    state.accumulator[i] += g * g;
    params[i] -= learning_rate * g / (std::sqrt(state.accumulator[i]) + state.epsilon);
  }
}

TrainResult train(const TripleStore& store, const TrainConfig& config, const TrainHooks& hooks,
                  kernels::Execution exec) {
  config.validate();
  if (!store.has_reciprocals()) {
    throw std::invalid_argument("training store must be reciprocal-augmented");
  }
  if (store.empty()) throw std::invalid_argument("training store is empty");
  using Clock = std::chrono::steady_clock;

  TrainResult result;
  result.params = init_params(config.shape(store.num_entities(), store.num_relations()), config.seed);
  AdagradState state(result.params.size());
  std::vector<double> grads(result.params.size());
  std::vector<Triple> order(store.triples().begin(), store.triples().end());
  LossWorkspace ws;

  for (int epoch = 1; epoch <= config.epochs && !result.aborted; ++epoch) {
    const auto start = Clock::now();
    // Every epoch permutes the original order, so the shuffle depends only on
    // (seed, epoch).
    std::copy(store.triples().begin(), store.triples().end(), order.begin());
    std::mt19937_64 rng(derive_seed(config.seed, "epoch-shuffle", static_cast<std::uint64_t>(epoch)));
    shuffle(std::span<Triple>(order), rng);

    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      std::span<const Triple> batch(order.data() + begin, end - begin);
      double loss = 0.0;
      try {
        loss = loss_batch(result.params, batch, config.reg_lambda, grads, exec, &ws);
      } catch (const NumericError& e) {
        result.aborted = true;
        result.diagnostic = "epoch " + std::to_string(epoch) + ": " + e.what();
        break;
      }
      if (!std::all_of(grads.begin(), grads.end(), [](double g) { return std::isfinite(g); })) {
        result.aborted = true;
        result.diagnostic = "epoch " + std::to_string(epoch) + ": non-finite gradient";
        break;
      }
      adagrad_step(result.params.values(), grads, state, config.learning_rate);
      ++result.steps;
      epoch_loss += loss;
    }
    if (result.aborted) break;
    EpochRecord rec;
    rec.epoch = epoch;
    rec.mean_loss = epoch_loss / static_cast<double>(order.size());
    rec.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.history.push_back(rec);
    if (hooks.progress) hooks.progress(rec);
    if (hooks.on_epoch_end) hooks.on_epoch_end(epoch, result.params);
  }
  return result;
}

void write_training_log(std::ostream& out, std::span<const EpochRecord> history) {
  out << "epoch,mean_loss,wall_seconds\n";
  char buf[64];
  for (const auto& r : history) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, r.mean_loss);
    out << r.epoch << ',' << std::string_view(buf, static_cast<std::size_t>(p - buf)) << ','
        << r.wall_seconds << '\n';
  }
}

}  // namespace kdgene
