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

#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kdgene/evaluator.hpp"
#include "kdgene/folds.hpp"
#include "kdgene/trainer.hpp"
#include "kdgene/triple_store.hpp"

namespace kdgene {

namespace relation_types {
inline constexpr std::string_view kDiseaseGene = "disease_gene";
inline constexpr std::string_view kDiseaseSymptom = "disease_symptom";
inline constexpr std::string_view kPpi = "ppi";
inline constexpr std::string_view kGoProtein = "go_protein";
inline constexpr std::string_view kPathwayProtein = "pathway_protein";
}  // namespace relation_types

struct KGVariantSpec {
  std::string name;
  std::set<std::string> relations;
  std::optional<double> ppi_min_score;  // on the 0..1000 confidence scale
};

// kg1 {DG}, kg2 {DG, DS}, kg3 {DG, PPI}, kg4 {DG, DS, PPI},
// kg5 {DG, PPI, GO, PW}, kg6 {DG, DS, PPI, GO, PW}.
KGVariantSpec variant_preset(std::string_view name);
// "<preset>" or "<preset>@<ppi_min_score>", e.g. "kg3@850".
KGVariantSpec parse_variant(std::string_view text);

// Drops excluded relation types and PPI triples scored below the threshold,
// then rebuilds the vocabulary over surviving entities.
TripleStore build_variant(const TripleStore& full, const KGVariantSpec& spec);

struct AblationArm {
  std::string name;
  KGVariantSpec variant;
  TrainConfig config;
};

// Every variant crossed with every config override (e.g. cell kinds).
// Names are "<variant>" or "<variant>/<label>". Duplicate names throw.
std::vector<AblationArm> make_arms(std::span<const KGVariantSpec> variants, const TrainConfig& base,
                                   std::span<const std::pair<std::string, TrainConfig>> overrides = {});

struct AblationRow {
  std::string name;
  MetricReport mean;
  std::vector<MetricReport> folds;
};

// Trains and evaluates each arm on the given folds of `full` with identical
// seeds. Fold assignments are made once on `full` and remapped by name.
std::vector<AblationRow> run_ablation(
    const TripleStore& full, std::span<const AblationArm> arms, const FoldSplit& folds,
    std::span<const int> fold_ids, kernels::Execution exec = kernels::Execution::serial,
    const std::function<void(const std::string&, int, const EpochRecord&)>& progress = {});

// ablation_report.csv: variant,metric,N,value
void write_ablation_report(std::ostream& out, std::span<const AblationRow> rows);

}  // namespace kdgene
