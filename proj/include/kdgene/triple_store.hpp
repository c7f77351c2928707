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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kdgene/types.hpp"

namespace kdgene {

inline constexpr std::string_view kReciprocalSuffix = "_reciprocal";

// Bijection between surface names and dense ids, in first-appearance order.
class Vocabulary {
 public:
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  std::optional<std::uint32_t> find(std::string_view name) const;
  const std::string& name(std::size_t id) const { return names_.at(id); }
  std::span<const std::string> names() const { return names_; }
  std::uint32_t intern(std::string_view name);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

class TripleStoreBuilder;

// Immutable indexed set of triples. The sparse membership test `contains`
// is the indicator tensor X[h, r, t].
class TripleStore {
 public:
  TripleStore() = default;

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_relations() const { return relations_.size(); }
  std::span<const Triple> triples() const { return triples_; }

  const Vocabulary& entities() const { return entities_; }
  const Vocabulary& relations() const { return relations_; }
  const std::string& entity_name(EntityId e) const { return entities_.name(index(e)); }
  const std::string& relation_name(RelationId r) const { return relations_.name(index(r)); }
  std::optional<EntityId> find_entity(std::string_view name) const;
  std::optional<RelationId> find_relation(std::string_view name) const;

  bool contains(const Triple& t) const;
  // Tails linked to (head, relation), ascending by id.
  std::span<const EntityId> tails(EntityId head, RelationId relation) const;

  bool has_types() const { return !entity_types_.empty(); }
  // Empty string when untyped.
  const std::string& entity_type(EntityId e) const;
  std::vector<EntityId> entities_of_type(std::string_view type) const;

  bool has_scores() const { return !scores_.empty(); }
  std::optional<double> score(const Triple& t) const;

  bool is_reciprocal(RelationId r) const { return reciprocal_.at(index(r)); }
  bool has_reciprocals() const;

 private:
  friend class TripleStoreBuilder;
  static std::uint64_t key(EntityId h, RelationId r) {
    return (static_cast<std::uint64_t>(index(h)) << 32) | index(r);
  }

  Vocabulary entities_;
  Vocabulary relations_;
  std::vector<bool> reciprocal_;
  std::vector<Triple> triples_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> by_head_relation_;
  std::vector<std::string> entity_types_;
  std::unordered_map<Triple, double, TripleHash> scores_;
};

class TripleStoreBuilder {
 public:
  TripleStoreBuilder() = default;
  // Seeds the vocabularies (ids and reciprocal flags) from an existing store
  // so that filtered copies share its identifiers.
  explicit TripleStoreBuilder(const TripleStore& vocabulary_source);

  EntityId entity(std::string_view name);
  RelationId relation(std::string_view name, bool reciprocal = false);

  // Returns false when the triple was already present.
  bool add(std::string_view head, std::string_view relation, std::string_view tail,
           std::optional<double> score = std::nullopt);
  bool add(const Triple& t, std::optional<double> score = std::nullopt);

  void set_type(std::string_view entity, std::string_view type);

  TripleStore build() &&;

 private:
  TripleStore store_;
  std::unordered_set<Triple, TripleHash> seen_;
  std::unordered_map<std::string, std::string> types_;
};

// Column positions of a TSV triple file. The score column is optional per
// line; lines without it carry no score.
struct TripleFormat {
  std::size_t head = 0;
  std::size_t relation = 1;
  std::size_t tail = 2;
  std::optional<std::size_t> score = 3;
};

void read_triples(std::istream& in, TripleStoreBuilder& builder, const TripleFormat& format = {});
void read_entity_types(std::istream& in, TripleStoreBuilder& builder);
TripleStore load_triples(std::istream& in, const TripleFormat& format = {});
// Convenience: files on disk; throws std::runtime_error naming the path.
TripleStore load_triples_file(const std::string& triples_path,
                              const std::optional<std::string>& types_path = std::nullopt);

void write_triples(std::ostream& out, const TripleStore& store);
void write_entity_types(std::ostream& out, const TripleStore& store);

// Adds (t, r_reciprocal, h) for every (h, r, t). Reciprocal of relation k is
// relation k + |R|.
TripleStore add_reciprocals(const TripleStore& store);

// Keeps triples satisfying `keep`. When `rebuild_vocabulary` is false the
// identifiers of `store` are preserved; otherwise only surviving entities and
// relations are kept, in first-appearance order.
template <class Pred>
TripleStore filter_triples(const TripleStore& store, Pred keep, bool rebuild_vocabulary);

// Candidate pool minus the training tails of (head, relation), ascending.
std::vector<EntityId> filtered_candidates(const TripleStore& store, EntityId head,
                                          RelationId relation, std::span<const EntityId> pool);

// --- implementation of the template ---------------------------------------

template <class Pred>
TripleStore filter_triples(const TripleStore& store, Pred keep, bool rebuild_vocabulary) {
  TripleStoreBuilder builder = rebuild_vocabulary ? TripleStoreBuilder{} : TripleStoreBuilder{store};
  for (const Triple& t : store.triples()) {
    if (!keep(t)) continue;
    auto s = store.score(t);
    if (rebuild_vocabulary) {
      builder.add(store.entity_name(t.head), store.relation_name(t.relation),
                  store.entity_name(t.tail), s);
    } else {
      builder.add(t, s);
    }
  }
  if (store.has_types()) {
    for (std::size_t e = 0; e < store.num_entities(); ++e) {
      const auto& type = store.entity_type(entity_id(e));
      if (!type.empty()) builder.set_type(store.entities().name(e), type);
    }
  }
  return std::move(builder).build();
}

}  // namespace kdgene
