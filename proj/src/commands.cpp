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

#include "kdgene/commands.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "kdgene/ablation.hpp"
#include "kdgene/checkpoint.hpp"
#include "kdgene/enrichment.hpp"
#include "kdgene/evaluator.hpp"
#include "kdgene/folds.hpp"
#include "kdgene/gradient_check.hpp"
#include "kdgene/metric_oracle.hpp"
#include "kdgene/random.hpp"
#include "kdgene/trainer.hpp"
#include "kdgene/triple_store.hpp"

#ifndef KDGENE_VERSION
#define KDGENE_VERSION "unknown"
#endif

namespace kdgene::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;       // postcondition not met (e.g. gradcheck, oracle mismatch)
constexpr int kUsage = 2;         // bad arguments, config or input files
constexpr int kNumeric = 3;       // training aborted on a non-finite value

struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_data_dir() {
  if (const char* env = std::getenv("KDGENE_DATA_DIR"); env && *env) return env;
  return ".";
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

// Command, resolved settings, input digests, seed, version and wall time.
class Manifest {
 public:
  explicit Manifest(std::string command) : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["code_version"] = KDGENE_VERSION;
    doc_["inputs"] = json::object();
    doc_["settings"] = json::object();
  }
  void input(const std::string& path) { doc_["inputs"][path] = sha256_file(path); }
  template <class T>
  void set(const std::string& key, const T& value) { doc_["settings"][key] = value; }
  void config(const TrainConfig& c) {
    json cfg;
    cfg["model"] = std::string(to_string(c.model));
    cfg["cell"] = std::string(to_string(c.cell));
    cfg["output_mode"] = std::string(to_string(c.output_mode));
    cfg["batch_size"] = c.batch_size;
    cfg["learning_rate"] = c.learning_rate;
    cfg["reg_lambda"] = c.reg_lambda;
    cfg["epochs"] = c.epochs;
    cfg["d_e"] = c.d_e;
    cfg["d_r"] = c.d_r;
    cfg["seed"] = c.seed;
    doc_["config"] = cfg;
    doc_["seed"] = c.seed;
    doc_["derived_seeds"] = {{"init", derive_seed(c.seed, "init")},
                             {"epoch_shuffle", "derive_seed(seed, \"epoch-shuffle\", epoch)"}};
  }
  void write(const std::string& path) {
    doc_["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream out(path);
    if (!out) throw CommandError("cannot write manifest " + path);
    out << doc_.dump(2) << '\n';
  }
  json& doc() { return doc_; }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

struct DataPaths {
  std::string dir;
  std::string triples() const { return (fs::path(dir) / "triples.tsv").string(); }
  std::string types() const { return (fs::path(dir) / "entity_types.tsv").string(); }
  std::string folds() const { return (fs::path(dir) / "folds.tsv").string(); }
};

struct Dataset {
  TripleStore store;
  std::optional<FoldSplit> folds;
};

Dataset load_dataset(const DataPaths& paths, bool need_folds, Manifest* manifest) {
  if (!fs::exists(paths.triples())) throw CommandError("missing triples file: " + paths.triples());
  std::optional<std::string> types;
  if (fs::exists(paths.types())) types = paths.types();
  Dataset d;
  d.store = load_triples_file(paths.triples(), types);
  if (manifest) {
    manifest->input(paths.triples());
    if (types) manifest->input(*types);
  }
  if (need_folds) {
    std::ifstream in(paths.folds());
    if (!in) throw CommandError("missing folds file: " + paths.folds() + " (run `kdgene prepare`)");
    d.folds = read_folds(in, d.store);
    if (manifest) manifest->input(paths.folds());
  }
  return d;
}

void check_fold(const FoldSplit& folds, int fold) {
  if (fold < 0 || fold >= folds.fold_count()) {
    throw CommandError("fold " + std::to_string(fold) + " out of range [0, " +
                       std::to_string(folds.fold_count()) + ")");
  }
}

ModelParams load_matching_checkpoint(const std::string& path, const TripleStore& store,
                                     Manifest* manifest) {
  if (!fs::exists(path)) throw CommandError("missing checkpoint: " + path);
  CheckpointVocabulary vocab;
  ModelParams params = load_checkpoint(path, &vocab);
  if (manifest) manifest->input(path);
  const auto names = store.entities().names();
  if (!std::equal(vocab.entities.begin(), vocab.entities.end(), names.begin(), names.end())) {
    throw CommandError("checkpoint entity vocabulary does not match the data directory");
  }
  for (std::size_t r = 0; r < store.num_relations(); ++r) {
    if (r >= vocab.relations.size() || vocab.relations[r] != store.relations().name(r)) {
      throw CommandError("checkpoint relation vocabulary does not match the data directory");
    }
  }
  return params;
}

kernels::Execution execution_for(int threads) {
  kernels::set_thread_count(threads);
  return threads > 1 ? kernels::Execution::parallel : kernels::Execution::serial;
}

// Config file (optional) then individual flags; flags win.
struct ConfigOptions {
  std::string file;
  std::map<std::string, std::string> flags;

  void add_to(CLI::App* app) {
    app->add_option("--config", file, "Flat key=value config file");
    for (auto key : config_keys()) {
      std::string flag = "--" + std::string(key);
      std::replace(flag.begin() + 2, flag.end(), '_', '-');
      app->add_option_function<std::string>(
          flag, [this, k = std::string(key)](const std::string& v) { flags[k] = v; },
          "Override config key " + std::string(key));
    }
  }

  TrainConfig resolve(Manifest* manifest) const {
    TrainConfig cfg;
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw CommandError("cannot open config file: " + file);
      cfg = parse_config(in);
      if (manifest) manifest->input(file);
    }
    for (const auto& [k, v] : flags) apply_config_setting(cfg, k, v);
    cfg.validate();
    return cfg;
  }
};

std::vector<std::string> suggestions(const TripleStore& store, const std::string& name) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& candidate : store.entities().names()) {
    scored.emplace_back(edit_distance(name, candidate), candidate);
  }
  const std::size_t k = std::min<std::size_t>(3, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

EntityId resolve_disease(const TripleStore& store, const std::string& name) {
  if (auto e = store.find_entity(name)) return *e;
  std::string msg = "unknown disease '" + name + "'";
  auto near = suggestions(store, name);
  if (!near.empty()) {
    msg += "; did you mean:";
    for (const auto& s : near) msg += " " + s;
  }
  throw CommandError(msg);
}

RelationId resolve_relation(const TripleStore& store, const std::string& name) {
  if (auto r = store.find_relation(name)) return *r;
  throw CommandError("unknown relation '" + name + "'");
}

std::string fmt_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// ---------------------------------------------------------------- prepare

struct PrepareArgs {
  std::string data_dir;
  std::vector<std::string> triples;
  std::string types;
  int folds = 10;
  std::uint64_t seed = 0;
  std::string target{relation_types::kDiseaseGene};
};

int cmd_prepare(const PrepareArgs& a, std::ostream& out, std::ostream& err) {
  DataPaths paths{a.data_dir};
  Manifest manifest("prepare");
  TripleStoreBuilder builder;
  std::vector<std::string> sources = a.triples.empty() ? std::vector<std::string>{paths.triples()} : a.triples;
  for (const auto& path : sources) {
    std::ifstream in(path);
    if (!in) throw CommandError("cannot open triples file: " + path);
    try {
      read_triples(in, builder);
    } catch (const ParseError& e) {
      throw CommandError(path + ": " + e.what());
    }
    manifest.input(path);
  }
  std::string types = a.types;
  if (types.empty() && fs::exists(paths.types())) types = paths.types();
  if (!types.empty()) {
    std::ifstream in(types);
    if (!in) throw CommandError("cannot open entity types file: " + types);
    read_entity_types(in, builder);
    manifest.input(types);
  }
  TripleStore store = std::move(builder).build();

  fs::create_directories(a.data_dir);
  const bool merged = sources.size() != 1 || !fs::exists(paths.triples()) ||
                      !fs::equivalent(sources.front(), paths.triples());
  if (merged) {
    std::ofstream t(paths.triples());
    write_triples(t, store);
  }
  if (!types.empty() && (!fs::exists(paths.types()) || !fs::equivalent(types, paths.types()))) {
    std::ofstream t(paths.types());
    write_entity_types(t, store);
  }

  const RelationId target = resolve_relation(store, a.target);
  FoldSplit folds = make_folds(store, target, a.folds, a.seed);
  {
    std::ofstream f(paths.folds());
    if (!f) throw CommandError("cannot write " + paths.folds());
    write_folds(f, folds, store);
  }

  out << "entities\t" << store.num_entities() << '\n';
  out << "relations\t" << store.num_relations() << '\n';
  out << "triples\t" << store.size() << '\n';
  if (store.has_types()) {
    std::map<std::string, std::size_t> by_type;
    for (std::size_t e = 0; e < store.num_entities(); ++e) {
      const auto& t = store.entity_type(entity_id(e));
      ++by_type[t.empty() ? "untyped" : t];
    }
    for (const auto& [t, n] : by_type) out << "entity_type\t" << t << '\t' << n << '\n';
  }
  std::vector<std::size_t> by_relation(store.num_relations(), 0);
  for (const Triple& t : store.triples()) ++by_relation[index(t.relation)];
  for (std::size_t r = 0; r < store.num_relations(); ++r) {
    out << "relation\t" << store.relations().name(r) << '\t' << by_relation[r] << '\n';
  }
  std::vector<std::size_t> sizes(static_cast<std::size_t>(a.folds), 0);
  for (const auto& [t, f] : folds.assignments()) ++sizes[static_cast<std::size_t>(f)];
  for (std::size_t f = 0; f < sizes.size(); ++f) out << "fold\t" << f << '\t' << sizes[f] << '\n';

  manifest.set("folds", a.folds);
  manifest.set("target", a.target);
  manifest.doc()["seed"] = a.seed;
  manifest.doc()["derived_seeds"] = {{"fold_shuffle", derive_seed(a.seed, "fold-shuffle")}};
  manifest.write((fs::path(a.data_dir) / "prepare.manifest.json").string());
  err << "wrote " << paths.folds() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data_dir;
  ConfigOptions config;
  int fold = -1;
  std::string out;
  std::string log;
  int threads = 1;
  bool quiet = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  DataPaths paths{a.data_dir};
  Manifest manifest("train");
  TrainConfig cfg = a.config.resolve(&manifest);
  for (const auto& w : config_warnings(cfg)) err << "warning: " << w << '\n';
  Dataset data = load_dataset(paths, true, &manifest);
  check_fold(*data.folds, a.fold);
  const std::string ckpt = a.out.empty()
                               ? (fs::path(a.data_dir) / ("model_fold" + std::to_string(a.fold) + ".kdg")).string()
                               : a.out;
  const std::string log_path = a.log.empty() ? ckpt + ".log.csv" : a.log;
  const auto exec = execution_for(a.threads);

  const TripleStore train_set = add_reciprocals(training_store(data.store, *data.folds, a.fold));
  TrainHooks hooks;
  if (!a.quiet) {
    hooks.progress = [&](const EpochRecord& r) {
      err << "epoch " << r.epoch << " mean_loss " << r.mean_loss << " (" << r.wall_seconds << " s)\n";
    };
  }
  TrainResult result = train(train_set, cfg, hooks, exec);

  CheckpointVocabulary vocab;
  vocab.entities.assign(data.store.entities().names().begin(), data.store.entities().names().end());
  vocab.relations.assign(train_set.relations().names().begin(), train_set.relations().names().end());
  save_checkpoint(ckpt, result.params, vocab);
  {
    std::ofstream log(log_path);
    if (!log) throw CommandError("cannot write " + log_path);
    write_training_log(log, result.history);
  }
  manifest.config(cfg);
  manifest.set("fold", a.fold);
  manifest.set("threads", a.threads);
  manifest.set("checkpoint", ckpt);
  manifest.set("steps", result.steps);
  manifest.write(ckpt + ".manifest.json");
  out << ckpt << '\n';
  if (result.aborted) {
    err << "training aborted: " << result.diagnostic << "; last finite state saved to " << ckpt << '\n';
    return kNumeric;
  }
  return kOk;
}

// ---------------------------------------------------------------- predict

struct PredictArgs {
  std::string data_dir;
  std::string checkpoint;
  std::string disease;
  std::string relation{relation_types::kDiseaseGene};
  int top_k = 10;
  std::optional<int> fold;
  std::string manifest;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  (void)err;
  DataPaths paths{a.data_dir};
  Manifest manifest("predict");
  Dataset data = load_dataset(paths, a.fold.has_value(), &manifest);
  ModelParams params = load_matching_checkpoint(a.checkpoint, data.store, &manifest);
  const EntityId disease = resolve_disease(data.store, a.disease);
  const RelationId relation = resolve_relation(data.store, a.relation);
  if (a.top_k < 0) throw CommandError("--top-k must be >= 0");
  TripleStore filter_store;
  const TripleStore* train = &data.store;
  if (a.fold) {
    check_fold(*data.folds, *a.fold);
    filter_store = training_store(data.store, *data.folds, *a.fold);
    train = &filter_store;
  }
  const auto pool = default_candidate_pool(data.store, relation);
  const RankingResult ranking = rank_query(params, *train, disease, relation, pool);
  const std::size_t k = std::min(ranking.ranked.size(), static_cast<std::size_t>(a.top_k));
  for (std::size_t i = 0; i < k; ++i) {
    out << (i + 1) << '\t' << data.store.entity_name(ranking.ranked[i].entity) << '\t'
        << fmt_double(ranking.ranked[i].score) << '\n';
  }
  if (!a.manifest.empty()) {
    manifest.set("disease", a.disease);
    manifest.set("top_k", a.top_k);
    manifest.write(a.manifest);
  }
  return kOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string data_dir;
  std::vector<std::string> checkpoints;
  std::vector<int> folds;
  std::string out;
  std::string rankings;
  bool oracle_check = false;
  int threads = 1;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.checkpoints.size() != a.folds.size()) {
    throw CommandError("give one --fold per --checkpoint");
  }
  DataPaths paths{a.data_dir};
  Manifest manifest("evaluate");
  Dataset data = load_dataset(paths, true, &manifest);
  const auto exec = execution_for(a.threads);
  const auto pool = default_candidate_pool(data.store, data.folds->target_relation());

  std::vector<MetricReport> reports;
  std::vector<RankingResult> all_rankings;
  bool oracle_ok = true;
  for (std::size_t i = 0; i < a.folds.size(); ++i) {
    check_fold(*data.folds, a.folds[i]);
    ModelParams params = load_matching_checkpoint(a.checkpoints[i], data.store, &manifest);
    FoldEvaluation ev = evaluate_fold(params, data.store, *data.folds, a.folds[i], pool, kDefaultCutoffs, exec);
    err << "fold " << a.folds[i] << ": " << ev.report.queries << " queries, " << ev.report.test_pairs
        << " test pairs, " << ev.report.cold_start_skipped << " cold-start skipped, "
        << ev.report.empty_skipped << " empty rankings skipped\n";
    if (a.oracle_check) {
      for (int n : kDefaultCutoffs) {
        auto hr = oracle::naive_hit_ratio(ev.rankings, n);
        auto map = oracle::naive_mean_average_precision(ev.rankings, n);
        auto agree = [](std::optional<double> x, const std::map<int, double>& m, int key) {
          auto it = m.find(key);
          if (!x) return it == m.end();
          return it != m.end() && std::abs(it->second - *x) <= 1e-12;
        };
        if (!agree(hr, ev.report.hr, n) || !agree(map, ev.report.map, n)) {
          err << "oracle mismatch at N=" << n << " on fold " << a.folds[i] << '\n';
          oracle_ok = false;
        }
      }
    }
    reports.push_back(ev.report);
    if (!a.rankings.empty()) {
      for (auto& r : ev.rankings) all_rankings.push_back(std::move(r));
    }
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw CommandError("cannot write " + a.out);
    sink = &file;
  }
  write_metrics_header(*sink);
  for (const auto& r : reports) write_metrics(*sink, r);
  if (reports.size() > 1) write_metrics(*sink, aggregate_folds(reports));
  if (!a.rankings.empty()) {
    std::ofstream rk(a.rankings);
    if (!rk) throw CommandError("cannot write " + a.rankings);
    write_rankings(rk, all_rankings, data.store);
  }
  manifest.set("folds", a.folds);
  manifest.set("oracle_check", a.oracle_check);
  manifest.set("threads", a.threads);
  const std::string mpath = a.out.empty() ? (fs::path(a.data_dir) / "evaluate.manifest.json").string()
                                          : a.out + ".manifest.json";
  manifest.write(mpath);
  if (a.oracle_check) err << "oracle check " << (oracle_ok ? "passed" : "FAILED") << '\n';
  return oracle_ok ? kOk : kFailure;
}

// ---------------------------------------------------------------- ablate

struct AblateArgs {
  std::string data_dir;
  ConfigOptions config;
  std::vector<std::string> variants;
  std::vector<std::string> cells;
  std::string eval_folds = "0";
  std::string out;
  int threads = 1;
};

std::vector<int> parse_fold_list(const std::string& text, int fold_count) {
  std::vector<int> out;
  if (text == "all") {
    for (int f = 0; f < fold_count; ++f) out.push_back(f);
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw CommandError("invalid fold list '" + text + "'");
    }
  }
  return out;
}

int cmd_ablate(const AblateArgs& a, std::ostream& out, std::ostream& err) {
  DataPaths paths{a.data_dir};
  Manifest manifest("ablate");
  TrainConfig base = a.config.resolve(&manifest);
  for (const auto& w : config_warnings(base)) err << "warning: " << w << '\n';
  Dataset data = load_dataset(paths, true, &manifest);
  const auto exec = execution_for(a.threads);

  std::vector<KGVariantSpec> variants;
  std::vector<std::string> names = a.variants;
  if (names.empty()) names = {"kg1", "kg2", "kg3", "kg4", "kg5", "kg6"};
  for (const auto& n : names) variants.push_back(parse_variant(n));

  std::vector<std::pair<std::string, TrainConfig>> overrides;
  for (const auto& c : a.cells) {
    TrainConfig cfg = base;
    if (c == "cp" || c == "distmult") {
      cfg.model = parse_scorer_kind(c);
    } else {
      cfg.model = ScorerKind::kdgene;
      cfg.cell = parse_cell_kind(c);
    }
    overrides.emplace_back(c, cfg);
  }
  const auto arms = make_arms(variants, base, overrides);
  const auto folds = parse_fold_list(a.eval_folds, data.folds->fold_count());
  for (int f : folds) check_fold(*data.folds, f);

  auto rows = run_ablation(data.store, arms, *data.folds, folds, exec,
                           [&](const std::string& arm, int fold, const EpochRecord& r) {
                             if (r.epoch == base.epochs || r.epoch == 1) {
                               err << arm << " fold " << fold << " epoch " << r.epoch << " mean_loss "
                                   << r.mean_loss << '\n';
                             }
                           });
  std::ofstream file;
  std::ostream* sink = &out;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw CommandError("cannot write " + a.out);
    sink = &file;
  }
  write_ablation_report(*sink, rows);
  manifest.config(base);
  manifest.set("variants", names);
  manifest.set("cells", a.cells);
  manifest.set("eval_folds", folds);
  manifest.set("threads", a.threads);
  manifest.write(a.out.empty() ? (fs::path(a.data_dir) / "ablate.manifest.json").string()
                               : a.out + ".manifest.json");
  return kOk;
}

// ---------------------------------------------------------------- gradcheck

struct GradcheckArgs {
  std::string model = "kdgene";
  std::string cell = "lstm";
  std::string output_mode = "standard";
  double lambda = 0.05;
  std::uint64_t seed = 0;
  std::size_t entities = 10;
  std::size_t relations = 3;
  std::size_t d_e = 5;
  std::size_t d_r = 4;
  std::size_t triples = 6;
  double step = 1e-6;
  double scale = 0.5;
  std::optional<double> tolerance;
  std::string manifest;
};

int cmd_gradcheck(const GradcheckArgs& a, std::ostream& out, std::ostream& err) {
  (void)err;
  if (a.entities > 20 || a.d_e > 8 || a.d_r > 8) {
    throw CommandError("gradcheck is meant for small models (|E| <= 20, d_e, d_r <= 8)");
  }
  ModelShape shape;
  shape.num_entities = a.entities;
  shape.num_relations = a.relations;
  shape.scorer = parse_scorer_kind(a.model);
  shape.cell = parse_cell_kind(a.cell);
  shape.output_mode = parse_output_mode(a.output_mode);
  shape.entity_dim = a.d_e;
  shape.relation_dim = shape.has_cell() ? a.d_r : a.d_e;
  const ModelParams params = init_params(shape, a.seed, a.scale);
  std::mt19937_64 rng(derive_seed(a.seed, "gradcheck-triples"));
  std::vector<Triple> batch;
  for (std::size_t i = 0; i < a.triples; ++i) {
    batch.push_back({entity_id(uniform_index(rng, a.entities)), relation_id(uniform_index(rng, a.relations)),
                     entity_id(uniform_index(rng, a.entities))});
  }
  const double tol = a.tolerance.value_or(shape.scorer == ScorerKind::cp && a.lambda == 0.0 ? 1e-6 : 1e-4);
  const GradCheckReport rep = gradient_check(params, batch, a.lambda, a.step);
  out << "parameters\t" << rep.parameters_checked << '\n'
      << "max_relative_error\t" << rep.max_relative_error << '\n'
      << "worst_parameter\t" << rep.worst_parameter << '\n'
      << "analytic\t" << fmt_double(rep.worst_analytic) << '\n'
      << "numeric\t" << fmt_double(rep.worst_numeric) << '\n'
      << "tolerance\t" << tol << '\n'
      << "status\t" << (rep.max_relative_error < tol ? "pass" : "fail") << '\n';
  if (!a.manifest.empty()) {
    Manifest m("gradcheck");
    m.doc()["seed"] = a.seed;
    m.set("model", a.model);
    m.set("cell", a.cell);
    m.set("output_mode", a.output_mode);
    m.set("lambda", a.lambda);
    m.set("max_relative_error", rep.max_relative_error);
    m.write(a.manifest);
  }
  return rep.max_relative_error < tol ? kOk : kFailure;
}

// ---------------------------------------------------------------- enrich

struct EnrichArgs {
  std::string data_dir;
  std::string set_a;
  std::string set_b;
  std::string checkpoint;
  std::string disease;
  std::optional<int> fold;
  int top_k = 50;
  std::string ppi_relation{relation_types::kPpi};
  std::string out;
};

std::vector<EntityId> read_gene_set(const std::string& path, const TripleStore& store) {
  std::ifstream in(path);
  if (!in) throw CommandError("cannot open gene set " + path);
  std::vector<EntityId> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto e = store.find_entity(line);
    if (!e) throw CommandError("gene '" + line + "' from " + path + " is not in the store");
    out.push_back(*e);
  }
  return out;
}

int cmd_enrich(const EnrichArgs& a, std::ostream& out, std::ostream& err) {
  (void)err;
  DataPaths paths{a.data_dir};
  Manifest manifest("enrich");
  Dataset data = load_dataset(paths, a.fold.has_value(), &manifest);
  const RelationId ppi = resolve_relation(data.store, a.ppi_relation);
  std::vector<EntityId> set_a, set_b;
  if (!a.set_a.empty() || !a.set_b.empty()) {
    if (a.set_a.empty() || a.set_b.empty()) throw CommandError("give both --set-a and --set-b");
    set_a = read_gene_set(a.set_a, data.store);
    set_b = read_gene_set(a.set_b, data.store);
    manifest.input(a.set_a);
    manifest.input(a.set_b);
  } else {
    if (a.checkpoint.empty() || a.disease.empty()) {
      throw CommandError("give --set-a/--set-b, or --checkpoint with --disease");
    }
    ModelParams params = load_matching_checkpoint(a.checkpoint, data.store, &manifest);
    const EntityId disease = resolve_disease(data.store, a.disease);
    const RelationId dg = resolve_relation(data.store, std::string(relation_types::kDiseaseGene));
    TripleStore filter_store;
    const TripleStore* train = &data.store;
    if (a.fold) {
      check_fold(*data.folds, *a.fold);
      filter_store = training_store(data.store, *data.folds, *a.fold);
      train = &filter_store;
    }
    auto known = train->tails(disease, dg);
    set_a.assign(known.begin(), known.end());
    const auto pool = default_candidate_pool(data.store, dg);
    const RankingResult ranking = rank_query(params, *train, disease, dg, pool);
    for (std::size_t i = 0; i < ranking.ranked.size() && i < static_cast<std::size_t>(a.top_k); ++i) {
      set_b.push_back(ranking.ranked[i].entity);
    }
    if (set_a.empty()) throw CommandError("disease '" + a.disease + "' has no training genes");
  }
  const EnrichmentResult res = link_enrichment(data.store, ppi, set_a, set_b);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw CommandError("cannot write " + a.out);
    sink = &file;
  }
  write_enrichment_report(*sink, res);
  if (!a.out.empty()) manifest.write(a.out + ".manifest.json");
  return kOk;
}

}  // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kdgene: knowledge-graph link prediction for disease gene prioritization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KDGENE_VERSION);

  const std::string data_dir_help = "Data directory (default: $KDGENE_DATA_DIR or .)";

  PrepareArgs prep;
  prep.data_dir = default_data_dir();
  auto* p = app.add_subcommand("prepare", "Load triples, write folds.tsv and print KG statistics");
  p->add_option("--data-dir", prep.data_dir, data_dir_help);
  p->add_option("--triples", prep.triples, "Triple TSV files (default: <data-dir>/triples.tsv)");
  p->add_option("--types", prep.types, "Entity type TSV (entity<TAB>type)");
  p->add_option("--folds", prep.folds, "Number of cross-validation folds")->check(CLI::Range(2, 1000000));
  p->add_option("--seed", prep.seed, "Seed for the fold permutation");
  p->add_option("--target", prep.target, "Relation to cross-validate");

  TrainArgs tr;
  tr.data_dir = default_data_dir();
  auto* t = app.add_subcommand("train", "Train on every fold except --fold");
  t->add_option("--data-dir", tr.data_dir, data_dir_help);
  tr.config.add_to(t);
  t->add_option("--fold", tr.fold, "Held-out fold id")->required();
  t->add_option("--out", tr.out, "Checkpoint path (default: <data-dir>/model_fold<k>.kdg)");
  t->add_option("--log", tr.log, "Training log CSV (default: <checkpoint>.log.csv)");
  t->add_option("--threads", tr.threads, "OpenMP threads; 1 is bitwise deterministic")->check(CLI::PositiveNumber);
  t->add_flag("--quiet", tr.quiet, "No per-epoch progress");

  PredictArgs pr;
  pr.data_dir = default_data_dir();
  auto* pd = app.add_subcommand("predict", "Rank candidate genes for one disease");
  pd->add_option("--data-dir", pr.data_dir, data_dir_help);
  pd->add_option("--checkpoint", pr.checkpoint, "Checkpoint file")->required();
  pd->add_option("--disease", pr.disease, "Query disease name")->required();
  pd->add_option("--relation", pr.relation, "Query relation");
  pd->add_option("--top-k", pr.top_k, "Number of candidates to print");
  pd->add_option("--fold", pr.fold, "Filter with the training side of this fold");
  pd->add_option("--manifest", pr.manifest, "Write a run manifest here");

  EvaluateArgs ev;
  ev.data_dir = default_data_dir();
  auto* e = app.add_subcommand("evaluate", "HR@N and MAP@N on held-out folds");
  e->add_option("--data-dir", ev.data_dir, data_dir_help);
  e->add_option("--checkpoint", ev.checkpoints, "Checkpoint (repeat once per --fold)")->required();
  e->add_option("--fold", ev.folds, "Held-out fold id (repeatable)")->required();
  e->add_option("--out", ev.out, "metrics.csv path (default: stdout)");
  e->add_option("--rankings", ev.rankings, "Dump rankings as disease<TAB>rank<TAB>gene<TAB>score");
  e->add_flag("--oracle-check", ev.oracle_check, "Recompute metrics with naive loops and compare");
  e->add_option("--threads", ev.threads, "OpenMP threads")->check(CLI::PositiveNumber);

  AblateArgs ab;
  ab.data_dir = default_data_dir();
  auto* a = app.add_subcommand("ablate", "Compare KG variants and interaction cells");
  a->add_option("--data-dir", ab.data_dir, data_dir_help);
  ab.config.add_to(a);
  a->add_option("--variants", ab.variants, "kg1..kg6, optionally <preset>@<ppi_min_score>")->delimiter(',');
  a->add_option("--cells", ab.cells, "Cross with scorers: lstm, gru, rnn, cp, distmult")->delimiter(',');
  a->add_option("--eval-folds", ab.eval_folds, "Comma-separated fold ids or 'all'");
  a->add_option("--out", ab.out, "ablation_report.csv path (default: stdout)");
  a->add_option("--threads", ab.threads, "OpenMP threads")->check(CLI::PositiveNumber);

  GradcheckArgs gc;
  auto* g = app.add_subcommand("gradcheck", "Compare analytic gradients with central differences");
  g->add_option("--model", gc.model, "cp, distmult or kdgene");
  g->add_option("--cell", gc.cell, "lstm, gru or rnn");
  g->add_option("--output-mode", gc.output_mode, "standard or as_written");
  g->add_option("--reg-lambda", gc.lambda, "N3 weight");
  g->add_option("--seed", gc.seed, "Seed for the random instance");
  g->add_option("--entities", gc.entities, "Number of entities (<= 20)");
  g->add_option("--relations", gc.relations, "Number of relations");
  g->add_option("--d-e", gc.d_e, "Entity dimension (<= 8)");
  g->add_option("--d-r", gc.d_r, "Relation dimension (<= 8)");
  g->add_option("--triples", gc.triples, "Triples in the checked batch");
  g->add_option("--step", gc.step, "Finite-difference step");
  g->add_option("--scale", gc.scale, "Uniform init scale of the instance");
  g->add_option("--tolerance", gc.tolerance, "Pass threshold on the max relative error");
  g->add_option("--manifest", gc.manifest, "Write a run manifest here");

  EnrichArgs en;
  en.data_dir = default_data_dir();
  auto* n = app.add_subcommand("enrich", "Binomial link-enrichment test on the PPI network");
  n->add_option("--data-dir", en.data_dir, data_dir_help);
  n->add_option("--set-a", en.set_a, "File with one gene per line");
  n->add_option("--set-b", en.set_b, "File with one gene per line");
  n->add_option("--checkpoint", en.checkpoint, "Use training genes and top-k predictions of --disease");
  n->add_option("--disease", en.disease, "Query disease");
  n->add_option("--fold", en.fold, "Filter with the training side of this fold");
  n->add_option("--top-k", en.top_k, "Predicted genes in set B");
  n->add_option("--ppi-relation", en.ppi_relation, "PPI relation name");
  n->add_option("--out", en.out, "enrichment_report.txt path (default: stdout)");

  std::vector<std::string> storage;
  storage.emplace_back("kdgene");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err);
  }

  try {
    if (*p) return cmd_prepare(prep, out, err);
    if (*t) return cmd_train(tr, out, err);
    if (*pd) return cmd_predict(pr, out, err);
    if (*e) return cmd_evaluate(ev, out, err);
    if (*a) return cmd_ablate(ab, out, err);
    if (*g) return cmd_gradcheck(gc, out, err);
    if (*n) return cmd_enrich(en, out, err);
  } catch (const NumericError& ex) {
    err << "error: " << ex.what() << '\n';
    return kNumeric;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace kdgene::cli
