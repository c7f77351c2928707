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

#include "kdgene/triple_store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace kdgene {

std::optional<std::uint32_t> Vocabulary::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t Vocabulary::intern(std::string_view name) {
  auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<std::uint32_t>(names_.size()));
  if (inserted) names_.emplace_back(name);
  return it->second;
}

std::optional<EntityId> TripleStore::find_entity(std::string_view name) const {
  if (auto id = entities_.find(name)) return entity_id(*id);
  return std::nullopt;
}

std::optional<RelationId> TripleStore::find_relation(std::string_view name) const {
  if (auto id = relations_.find(name)) return relation_id(*id);
  return std::nullopt;
}

bool TripleStore::contains(const Triple& t) const {
  auto tl = tails(t.head, t.relation);
  return std::binary_search(tl.begin(), tl.end(), t.tail);
}

std::span<const EntityId> TripleStore::tails(EntityId head, RelationId relation) const {
  auto it = by_head_relation_.find(key(head, relation));
  if (it == by_head_relation_.end()) return {};
  return it->second;
}

const std::string& TripleStore::entity_type(EntityId e) const {
  static const std::string kUntyped;
  if (entity_types_.empty()) return kUntyped;
  return entity_types_.at(index(e));
}

std::vector<EntityId> TripleStore::entities_of_type(std::string_view type) const {
  std::vector<EntityId> out;
  for (std::size_t e = 0; e < entity_types_.size(); ++e) {
    if (entity_types_[e] == type) out.push_back(entity_id(e));
  }
  return out;
}

std::optional<double> TripleStore::score(const Triple& t) const {
  auto it = scores_.find(t);
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

bool TripleStore::has_reciprocals() const {
  return std::any_of(reciprocal_.begin(), reciprocal_.end(), [](bool b) { return b; });
}

TripleStoreBuilder::TripleStoreBuilder(const TripleStore& source) {
  store_.entities_ = source.entities_;
  store_.relations_ = source.relations_;
  store_.reciprocal_ = source.reciprocal_;
}

EntityId TripleStoreBuilder::entity(std::string_view name) {
  return entity_id(store_.entities_.intern(name));
}

RelationId TripleStoreBuilder::relation(std::string_view name, bool reciprocal) {
  auto id = store_.relations_.intern(name);
  if (id == store_.reciprocal_.size()) store_.reciprocal_.push_back(reciprocal);
  return relation_id(id);
}

bool TripleStoreBuilder::add(std::string_view head, std::string_view relation_name,
                             std::string_view tail, std::optional<double> score) {
  Triple t;
  t.head = entity(head);
  t.relation = relation(relation_name);
  t.tail = entity(tail);
  return add(t, score);
}

bool TripleStoreBuilder::add(const Triple& t, std::optional<double> score) {
  if (index(t.head) >= store_.entities_.size() || index(t.tail) >= store_.entities_.size() ||
      index(t.relation) >= store_.relations_.size()) {
    throw std::out_of_range("triple references an unknown identifier");
  }
  if (!seen_.insert(t).second) return false;
  store_.triples_.push_back(t);
  if (score) store_.scores_.emplace(t, *score);
  return true;
}

void TripleStoreBuilder::set_type(std::string_view entity_name, std::string_view type) {
  types_[std::string(entity_name)] = std::string(type);
}

TripleStore TripleStoreBuilder::build() && {
  TripleStore& s = store_;
  for (const Triple& t : s.triples_) {
    s.by_head_relation_[TripleStore::key(t.head, t.relation)].push_back(t.tail);
  }
  for (auto& [k, tails] : s.by_head_relation_) std::sort(tails.begin(), tails.end());
  if (!types_.empty()) {
    s.entity_types_.assign(s.entities_.size(), std::string{});
    for (std::size_t e = 0; e < s.entities_.size(); ++e) {
      auto it = types_.find(s.entities_.name(e));
      if (it != types_.end()) s.entity_types_[e] = it->second;
    }
  }
  seen_.clear();
  types_.clear();
  return std::move(s);
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

// Strips a trailing CR and reports whether the line carries data.
bool data_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.empty() || line.front() == '#') return false;
  return line.find_first_not_of(" \t") != std::string::npos;
}

}  // namespace

void read_triples(std::istream& in, TripleStoreBuilder& builder, const TripleFormat& format) {
  const std::size_t needed = std::max({format.head, format.relation, format.tail}) + 1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!data_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() < std::max<std::size_t>(needed, 3)) {
      throw ParseError("expected at least 3 tab-separated fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    std::optional<double> score;
    if (format.score && *format.score < fields.size() && !fields[*format.score].empty()) {
      double v = 0;
      auto f = fields[*format.score];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw ParseError("invalid score field '" + std::string(f) + "'", lineno);
      }
      score = v;
    }
    if (fields[format.head].empty() || fields[format.relation].empty() ||
        fields[format.tail].empty()) {
      throw ParseError("empty head, relation or tail field", lineno);
    }
    builder.add(fields[format.head], fields[format.relation], fields[format.tail], score);
  }
}

void read_entity_types(std::istream& in, TripleStoreBuilder& builder) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!data_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() < 2) throw ParseError("expected entity<TAB>type", lineno);
    builder.set_type(fields[0], fields[1]);
  }
}

TripleStore load_triples(std::istream& in, const TripleFormat& format) {
  TripleStoreBuilder builder;
  read_triples(in, builder, format);
  return std::move(builder).build();
}

TripleStore load_triples_file(const std::string& triples_path,
                              const std::optional<std::string>& types_path) {
  std::ifstream in(triples_path);
  if (!in) throw std::runtime_error("cannot open triples file: " + triples_path);
  TripleStoreBuilder builder;
  try {
    read_triples(in, builder);
  } catch (const ParseError& e) {
    throw ParseError(triples_path + ": " + e.what(), e.line());
  }
  if (types_path) {
    std::ifstream tin(*types_path);
    if (!tin) throw std::runtime_error("cannot open entity types file: " + *types_path);
    read_entity_types(tin, builder);
  }
  return std::move(builder).build();
}

void write_triples(std::ostream& out, const TripleStore& store) {
  for (const Triple& t : store.triples()) {
    out << store.entity_name(t.head) << '\t' << store.relation_name(t.relation) << '\t'
        << store.entity_name(t.tail);
    if (auto s = store.score(t)) {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *s);
      out << '\t' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

void write_entity_types(std::ostream& out, const TripleStore& store) {
  if (!store.has_types()) return;
  for (std::size_t e = 0; e < store.num_entities(); ++e) {
    const auto& type = store.entity_type(entity_id(e));
    if (!type.empty()) out << store.entities().name(e) << '\t' << type << '\n';
  }
}

TripleStore add_reciprocals(const TripleStore& store) {
  if (store.has_reciprocals()) {
    throw std::invalid_argument("store already contains reciprocal relations");
  }
  TripleStoreBuilder builder{store};
  const std::size_t num_relations = store.num_relations();
  for (std::size_t r = 0; r < num_relations; ++r) {
    builder.relation(store.relations().name(r) + std::string(kReciprocalSuffix), true);
  }
  for (const Triple& t : store.triples()) builder.add(t, store.score(t));
  for (const Triple& t : store.triples()) {
    builder.add(Triple{t.tail, relation_id(index(t.relation) + num_relations), t.head},
                store.score(t));
  }
  if (store.has_types()) {
    for (std::size_t e = 0; e < store.num_entities(); ++e) {
      builder.set_type(store.entities().name(e), store.entity_type(entity_id(e)));
    }
  }
  return std::move(builder).build();
}

std::vector<EntityId> filtered_candidates(const TripleStore& store, EntityId head,
                                          RelationId relation, std::span<const EntityId> pool) {
  std::vector<EntityId> out(pool.begin(), pool.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  auto known = store.tails(head, relation);
  std::vector<EntityId> result;
  result.reserve(out.size());
  std::set_difference(out.begin(), out.end(), known.begin(), known.end(),
                      std::back_inserter(result));
  return result;
}

}  // namespace kdgene
