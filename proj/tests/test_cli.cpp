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

#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "kdgene/commands.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = kdgene::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Prepared copy of the planted fixture with 5 folds.
struct Workspace {
  kdgene::test::TempDir dir{"cli"};
  Workspace() {
    auto r = invoke({"prepare", "--data-dir", dir.path().string(), "--triples",
                     kdgene::test::data_path("planted/triples.tsv"), "--types",
                     kdgene::test::data_path("planted/entity_types.tsv"), "--folds", "5", "--seed", "1"});
    REQUIRE(r.code == 0);
  }
  std::string d() const { return dir.path().string(); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("edit distance") {
  CHECK(kdgene::cli::edit_distance("kitten", "sitting") == 3);
  CHECK(kdgene::cli::edit_distance("", "abc") == 3);
  CHECK(kdgene::cli::edit_distance("dis00", "dis00") == 0);
}

TEST_CASE("prepare prints stats for the three-line fixture") {
  kdgene::test::TempDir dir("prep3");
  auto r = invoke({"prepare", "--data-dir", dir.path().string(), "--triples", kdgene::test::data_path("three_lines.tsv"),
                   "--folds", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("entities\t4\n") != std::string::npos);
  CHECK(r.out.find("relations\t2\n") != std::string::npos);
  CHECK(r.out.find("triples\t3\n") != std::string::npos);
  CHECK(fs::exists(dir / "folds.tsv"));
  CHECK(fs::exists(dir / "triples.tsv"));
  auto manifest = nlohmann::json::parse(slurp(dir / "prepare.manifest.json"));
  CHECK(manifest["command"] == "prepare");
  CHECK(manifest["inputs"].size() == 1);
}

TEST_CASE("prepare on a missing file names the path") {
  kdgene::test::TempDir dir("prepmiss");
  auto r = invoke({"prepare", "--data-dir", dir.path().string(), "--triples", "/no/such/file.tsv"});
  CHECK(r.code != 0);
  CHECK(r.err.find("/no/such/file.tsv") != std::string::npos);
}

TEST_CASE("train, predict, evaluate on the planted fixture") {
  Workspace ws;
  const auto start = std::chrono::steady_clock::now();
  auto t = invoke({"train", "--data-dir", ws.d(), "--fold", "0", "--epochs", "1", "--quiet"});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(t.code == 0);
  CHECK(secs < 5.0);
  const std::string ckpt = ws.dir / "model_fold0.kdg";
  CHECK(t.out == ckpt + "\n");
  CHECK(fs::exists(ckpt + ".log.csv"));
  auto manifest = nlohmann::json::parse(slurp(ckpt + ".manifest.json"));
  CHECK(manifest["config"]["epochs"] == 1);
  CHECK(manifest["inputs"].size() == 3);
  CHECK(manifest.contains("wall_seconds"));

  SUBCASE("predict lists sorted candidates") {
    auto p = invoke({"predict", "--data-dir", ws.d(), "--checkpoint", ckpt, "--disease", "dis03", "--top-k", "5"});
    REQUIRE(p.code == 0);
    std::istringstream lines(p.out);
    double prev = INFINITY;
    int n = 0;
    for (std::string line; std::getline(lines, line); ++n) {
      const double score = std::stod(line.substr(line.rfind('\t') + 1));
      CHECK(score <= prev);
      prev = score;
    }
    CHECK(n == 5);
  }
  SUBCASE("predict with top-k 0 prints nothing") {
    auto p = invoke({"predict", "--data-dir", ws.d(), "--checkpoint", ckpt, "--disease", "dis03", "--top-k", "0"});
    CHECK(p.code == 0);
    CHECK(p.out.empty());
  }
  SUBCASE("unknown disease suggests near names") {
    auto p = invoke({"predict", "--data-dir", ws.d(), "--checkpoint", ckpt, "--disease", "dis3"});
    CHECK(p.code != 0);
    CHECK(p.err.find("dis03") != std::string::npos);
  }
  SUBCASE("evaluate writes metrics and passes the oracle check") {
    const std::string metrics = ws.dir / "metrics.csv";
    auto e = invoke({"evaluate", "--data-dir", ws.d(), "--checkpoint", ckpt, "--fold", "0", "--out", metrics,
                     "--oracle-check", "--rankings", ws.dir / "rankings.tsv"});
    CHECK(e.code == 0);
    const std::string csv = slurp(metrics);
    CHECK(csv.rfind("fold,metric,N,value\n0,HR,1,", 0) == 0);
    CHECK(slurp(ws.dir / "rankings.tsv").find("dis") == 0);
  }
  SUBCASE("evaluate with a missing checkpoint fails") {
    auto e = invoke({"evaluate", "--data-dir", ws.d(), "--checkpoint", ws.dir / "nope.kdg", "--fold", "0"});
    CHECK(e.code != 0);
  }
}

TEST_CASE("config file with flag override; unknown key") {
  Workspace ws;
  const std::string cfg = ws.dir / "run.cfg";
  std::ofstream(cfg) << "epochs=4\nreg_lambda=0.37\nd_e=8\nd_r=4\n";
  auto t = invoke({"train", "--data-dir", ws.d(), "--config", cfg, "--epochs", "1", "--fold", "1", "--quiet"});
  REQUIRE(t.code == 0);
  CHECK(t.err.find("warning: reg_lambda") != std::string::npos);
  auto manifest = nlohmann::json::parse(slurp(ws.dir / "model_fold1.kdg.manifest.json"));
  CHECK(manifest["config"]["epochs"] == 1);
  CHECK(manifest["config"]["d_e"] == 8);

  std::ofstream(cfg) << "dropout=0.1\n";
  auto bad = invoke({"train", "--data-dir", ws.d(), "--config", cfg, "--fold", "0"});
  CHECK(bad.code != 0);
  CHECK(bad.err.find("reg_lambda") != std::string::npos);
}

TEST_CASE("train twice gives identical checkpoints") {
  Workspace ws;
  std::vector<std::string> common{"train", "--data-dir", ws.d(), "--fold", "2", "--epochs", "2", "--quiet",
                                  "--d-e", "16", "--d-r", "8"};
  auto a = common, b = common;
  a.insert(a.end(), {"--out", ws.dir / "a.kdg"});
  b.insert(b.end(), {"--out", ws.dir / "b.kdg"});
  REQUIRE(invoke(a).code == 0);
  REQUIRE(invoke(b).code == 0);
  CHECK(slurp(ws.dir / "a.kdg") == slurp(ws.dir / "b.kdg"));
}

TEST_CASE("gradcheck reports the worst parameter") {
  auto cp = invoke({"gradcheck", "--model", "cp", "--reg-lambda", "0"});
  CHECK(cp.code == 0);
  CHECK(cp.out.find("worst_parameter\t") != std::string::npos);
  auto lstm = invoke({"gradcheck", "--model", "kdgene", "--cell", "lstm", "--output-mode", "standard"});
  CHECK(lstm.code == 0);
  CHECK(lstm.out.find("status\tpass") != std::string::npos);
  auto strict = invoke({"gradcheck", "--tolerance", "0"});
  CHECK(strict.code == 1);
}

TEST_CASE("ablate rejects duplicate variants and emits one row per preset and metric") {
  Workspace ws;
  auto dup = invoke({"ablate", "--data-dir", ws.d(), "--variants", "kg1,kg1", "--epochs", "1"});
  CHECK(dup.code != 0);
  auto r = invoke({"ablate", "--data-dir", ws.d(), "--epochs", "1", "--d-e", "8", "--d-r", "4", "--out",
                   ws.dir / "ablation_report.csv"});
  REQUIRE(r.code == 0);
  std::istringstream lines(slurp(ws.dir / "ablation_report.csv"));
  std::map<std::string, int> per_metric;
  std::string line;
  std::getline(lines, line);
  CHECK(line == "variant,metric,N,value");
  while (std::getline(lines, line)) {
    auto a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
    ++per_metric[line.substr(a + 1, c - a - 1)];
  }
  CHECK(per_metric.size() == 8);
  for (const auto& [k, n] : per_metric) CHECK(n == 6);
}

TEST_CASE("single ablation arm equals train + evaluate") {
  Workspace ws;
  std::vector<std::string> cfg{"--epochs", "2", "--d-e", "8", "--d-r", "4"};
  auto ab = std::vector<std::string>{"ablate", "--data-dir", ws.d(), "--variants", "kg6", "--eval-folds", "0"};
  ab.insert(ab.end(), cfg.begin(), cfg.end());
  auto rep = invoke(ab);
  REQUIRE(rep.code == 0);
  auto tr = std::vector<std::string>{"train", "--data-dir", ws.d(), "--fold", "0", "--quiet"};
  tr.insert(tr.end(), cfg.begin(), cfg.end());
  REQUIRE(invoke(tr).code == 0);
  auto ev = invoke({"evaluate", "--data-dir", ws.d(), "--checkpoint", ws.dir / "model_fold0.kdg", "--fold", "0"});
  REQUIRE(ev.code == 0);
  // Same numbers, different first column.
  std::istringstream a(rep.out), b(ev.out);
  std::string la, lb;
  std::getline(a, la);
  std::getline(b, lb);
  while (std::getline(a, la) && std::getline(b, lb)) CHECK(la.substr(la.find(',')) == lb.substr(lb.find(',')));
}

TEST_CASE("enrich from gene set files") {
  Workspace ws;
  std::ofstream(ws.dir / "a.txt") << "gene000\ngene010\n";
  std::ofstream(ws.dir / "b.txt") << "gene020\ngene030\ngene040\n";
  auto r = invoke({"enrich", "--data-dir", ws.d(), "--set-a", ws.dir / "a.txt", "--set-b", ws.dir / "b.txt"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("pair_count\t10\n") != std::string::npos);
}

TEST_CASE("data directory from the environment") {
  Workspace ws;
  ::setenv("KDGENE_DATA_DIR", ws.d().c_str(), 1);
  auto r = invoke({"train", "--fold", "0", "--epochs", "1", "--d-e", "4", "--d-r", "4", "--quiet"});
  ::unsetenv("KDGENE_DATA_DIR");
  CHECK(r.code == 0);
  CHECK(fs::exists(ws.dir / "model_fold0.kdg"));
}

}  // TEST_SUITE
