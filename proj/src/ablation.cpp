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

#include "kdgene/ablation.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace kdgene {

using namespace relation_types;

KGVariantSpec variant_preset(std::string_view name) {
  const std::string DG(kDiseaseGene), DS(kDiseaseSymptom), PPI(kPpi), GO(kGoProtein),
      PW(kPathwayProtein);
  KGVariantSpec spec;
  spec.name = std::string(name);
  if (name == "kg1") spec.relations = {DG};
  else if (name == "kg2") spec.relations = {DG, DS};
  else if (name == "kg3") spec.relations = {DG, PPI};
  else if (name == "kg4") spec.relations = {DG, DS, PPI};
  else if (name == "kg5") spec.relations = {DG, PPI, GO, PW};
  else if (name == "kg6") spec.relations = {DG, DS, PPI, GO, PW};
  else throw std::invalid_argument("unknown KG preset '" + std::string(name) + "' (expected kg1..kg6)");
  return spec;
}

KGVariantSpec parse_variant(std::string_view text) {
  const auto at = text.find('@');
  KGVariantSpec spec = variant_preset(text.substr(0, at));
  if (at != std::string_view::npos) {
    const auto num = text.substr(at + 1);
    double v = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc{} || p != num.data() + num.size() || v < 0 || v > 1000) {
      throw std::invalid_argument("invalid PPI threshold in '" + std::string(text) + "'");
    }
    spec.ppi_min_score = v;
    spec.name = std::string(text);
  }
  return spec;
}

TripleStore build_variant(const TripleStore& full, const KGVariantSpec& spec) {
  if (!spec.relations.count(std::string(kDiseaseGene))) {
    throw std::invalid_argument("variant '" + spec.name + "' must include disease_gene");
  }
  std::vector<bool> keep_relation(full.num_relations(), false);
  for (const auto& name : spec.relations) {
    auto r = full.find_relation(name);
    if (!r) throw std::invalid_argument("variant '" + spec.name + "': relation '" + name + "' not in store");
    keep_relation[index(*r)] = true;
  }
  const auto ppi = full.find_relation(kPpi);
  if (spec.ppi_min_score && ppi && keep_relation[index(*ppi)]) {
    for (const Triple& t : full.triples()) {
      if (t.relation == *ppi && !full.score(t)) {
        throw std::invalid_argument("PPI threshold requires a score column on every ppi triple");
      }
    }
  }
  return filter_triples(
      full,
      [&](const Triple& t) {
        if (!keep_relation[index(t.relation)]) return false;
        if (spec.ppi_min_score && ppi && t.relation == *ppi) return *full.score(t) >= *spec.ppi_min_score;
        return true;
      },
      true);
}

std::vector<AblationArm> make_arms(std::span<const KGVariantSpec> variants, const TrainConfig& base,
                                   std::span<const std::pair<std::string, TrainConfig>> overrides) {
  std::vector<AblationArm> arms;
  std::unordered_set<std::string> names;
  auto push = [&](AblationArm arm) {
    if (!names.insert(arm.name).second) throw std::invalid_argument("duplicate ablation arm '" + arm.name + "'");
    arms.push_back(std::move(arm));
  };
  for (const auto& v : variants) {
    if (overrides.empty()) {
      push({v.name, v, base});
      continue;
    }
    for (const auto& [label, cfg] : overrides) push({v.name + "/" + label, v, cfg});
  }
  return arms;
}

std::vector<AblationRow> run_ablation(
    const TripleStore& full, std::span<const AblationArm> arms, const FoldSplit& folds,
    std::span<const int> fold_ids, kernels::Execution exec,
    const std::function<void(const std::string&, int, const EpochRecord&)>& progress) {
  std::vector<AblationRow> rows;
  for (const auto& arm : arms) {
    const TripleStore variant = build_variant(full, arm.variant);
    const FoldSplit vfolds = remap_folds(folds, full, variant);
    const auto pool = default_candidate_pool(variant, vfolds.target_relation());
    AblationRow row;
    row.name = arm.name;
    for (int f : fold_ids) {
      const TripleStore train_set = add_reciprocals(training_store(variant, vfolds, f));
      TrainHooks hooks;
      if (progress) hooks.progress = [&](const EpochRecord& r) { progress(arm.name, f, r); };
      TrainResult trained = train(train_set, arm.config, hooks, exec);
      if (trained.aborted) throw NumericError(arm.name + ": " + trained.diagnostic);
      row.folds.push_back(evaluate_fold(trained.params, variant, vfolds, f, pool, kDefaultCutoffs, exec).report);
    }
    row.mean = aggregate_folds(row.folds);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_ablation_report(std::ostream& out, std::span<const AblationRow> rows) {
  out << "variant,metric,N,value\n";
  for (const auto& row : rows) write_metrics(out, row.mean, row.name);
}

}  // namespace kdgene
