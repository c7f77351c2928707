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

#include "kdgene/folds.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "kdgene/random.hpp"

namespace kdgene {

FoldSplit::FoldSplit(RelationId target, int fold_count,
                     std::vector<std::pair<Triple, int>> assignments)
    : target_(target), fold_count_(fold_count), assignments_(std::move(assignments)) {
  for (const auto& [t, f] : assignments_) {
    if (f < 0 || f >= fold_count_) throw std::invalid_argument("fold index out of range");
    if (t.relation != target_) throw std::invalid_argument("fold triple is not of the target relation");
    if (!lookup_.emplace(t, f).second) throw std::invalid_argument("triple assigned to more than one fold");
  }
}

std::optional<int> FoldSplit::fold_of(const Triple& t) const {
  auto it = lookup_.find(t);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<Triple> FoldSplit::test_triples(int fold) const {
  std::vector<Triple> out;
  for (const auto& [t, f] : assignments_) {
    if (f == fold) out.push_back(t);
  }
  return out;
}

FoldSplit make_folds(const TripleStore& store, RelationId target, int fold_count,
                     std::uint64_t seed) {
  if (fold_count < 2) throw std::invalid_argument("fold_count must be at least 2");
  if (index(target) >= store.num_relations()) throw std::invalid_argument("unknown target relation");
  std::vector<Triple> targets;
  for (const Triple& t : store.triples()) {
    if (t.relation == target) targets.push_back(t);
  }
  if (targets.size() < static_cast<std::size_t>(fold_count)) {
    throw std::invalid_argument("fewer target triples (" + std::to_string(targets.size()) +
                                ") than folds (" + std::to_string(fold_count) + ")");
  }
  std::mt19937_64 rng(derive_seed(seed, "fold-shuffle"));
  shuffle(std::span<Triple>(targets), rng);
  std::vector<std::pair<Triple, int>> assignments;
  assignments.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    assignments.emplace_back(targets[i], static_cast<int>(i % static_cast<std::size_t>(fold_count)));
  }
  return FoldSplit(target, fold_count, std::move(assignments));
}

TripleStore training_store(const TripleStore& store, const FoldSplit& folds, int fold) {
  if (fold < 0 || fold >= folds.fold_count()) throw std::invalid_argument("fold id out of range");
  return filter_triples(
      store,
      [&](const Triple& t) {
        if (t.relation != folds.target_relation()) return true;
        auto f = folds.fold_of(t);
        return !f || *f != fold;
      },
      false);
}

FoldSplit remap_folds(const FoldSplit& folds, const TripleStore& from, const TripleStore& to) {
  auto target = to.find_relation(from.relation_name(folds.target_relation()));
  if (!target) throw std::invalid_argument("target relation missing from remapped store");
  std::vector<std::pair<Triple, int>> out;
  out.reserve(folds.assignments().size());
  for (const auto& [t, f] : folds.assignments()) {
    auto h = to.find_entity(from.entity_name(t.head));
    auto tl = to.find_entity(from.entity_name(t.tail));
    if (!h || !tl) throw std::invalid_argument("fold triple missing from remapped store");
    out.emplace_back(Triple{*h, *target, *tl}, f);
  }
  return FoldSplit(*target, folds.fold_count(), std::move(out));
}

void write_folds(std::ostream& out, const FoldSplit& folds, const TripleStore& store) {
  out << "# fold_count=" << folds.fold_count() << '\n';
  for (const auto& [t, f] : folds.assignments()) {
    out << store.entity_name(t.head) << '\t' << store.relation_name(t.relation) << '\t'
        << store.entity_name(t.tail) << '\t' << f << '\n';
  }
}

FoldSplit read_folds(std::istream& in, const TripleStore& store) {
  std::vector<std::pair<Triple, int>> assignments;
  std::optional<RelationId> target;
  int max_fold = -1;
  int declared = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# fold_count=", 0) == 0) {
      declared = std::stoi(line.substr(13));
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find('\t', start)) != std::string::npos; start = pos + 1) {
      fields.push_back(line.substr(start, pos - start));
    }
    fields.push_back(line.substr(start));
    if (fields.size() != 4) throw ParseError("expected head<TAB>relation<TAB>tail<TAB>fold", lineno);
    auto h = store.find_entity(fields[0]);
    auto r = store.find_relation(fields[1]);
    auto tl = store.find_entity(fields[2]);
    if (!h || !r || !tl || !store.contains(Triple{*h, *r, *tl})) {
      throw ParseError("fold triple not present in the triple store", lineno);
    }
    if (target && *target != *r) throw ParseError("folds mix several relations", lineno);
    target = *r;
    int fold = -1;
    auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), fold);
    if (ec != std::errc{} || fold < 0) throw ParseError("invalid fold index", lineno);
    max_fold = std::max(max_fold, fold);
    assignments.emplace_back(Triple{*h, *r, *tl}, fold);
  }
  if (!target) throw std::invalid_argument("folds file is empty");
  return FoldSplit(*target, std::max(declared, max_fold + 1), std::move(assignments));
}

}  // namespace kdgene
