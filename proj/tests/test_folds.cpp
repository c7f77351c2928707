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

#include <algorithm>
#include <map>
#include <sstream>

#include "kdgene/folds.hpp"
#include "test_support.hpp"

using namespace kdgene;

namespace {

TripleStore gene_store(int diseases, int genes_per_disease) {
  TripleStoreBuilder b;
  for (int d = 0; d < diseases; ++d) {
    for (int g = 0; g < genes_per_disease; ++g) {
      b.add("d" + std::to_string(d), "disease_gene", "g" + std::to_string(d * genes_per_disease + g));
    }
    b.add("d" + std::to_string(d), "disease_symptom", "s" + std::to_string(d));
  }
  return std::move(b).build();
}

}  // namespace

TEST_SUITE("kg-store") {

TEST_CASE("ten target triples into ten folds") {
  auto s = gene_store(10, 1);
  auto f = make_folds(s, *s.find_relation("disease_gene"), 10, 3);
  for (int k = 0; k < 10; ++k) CHECK(f.test_triples(k).size() == 1);
}

TEST_CASE("fold sizes differ by at most one and cover every target triple") {
  auto s = gene_store(7, 3);
  const auto dg = *s.find_relation("disease_gene");
  auto f = make_folds(s, dg, 4, 11);
  std::map<int, int> sizes;
  for (const auto& [t, k] : f.assignments()) {
    CHECK(t.relation == dg);
    ++sizes[k];
  }
  CHECK(f.assignments().size() == 21);
  auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end(),
                                      [](auto& a, auto& b) { return a.second < b.second; });
  CHECK(hi->second - lo->second <= 1);
}

TEST_CASE("same seed gives identical assignments, another seed differs") {
  auto s = gene_store(20, 2);
  const auto dg = *s.find_relation("disease_gene");
  auto a = make_folds(s, dg, 5, 42);
  auto b = make_folds(s, dg, 5, 42);
  auto c = make_folds(s, dg, 5, 43);
  CHECK(a.assignments() == b.assignments());
  CHECK(a.assignments() != c.assignments());
}

TEST_CASE("too few target triples or folds is an error") {
  auto s = gene_store(3, 1);
  const auto dg = *s.find_relation("disease_gene");
  CHECK_THROWS(make_folds(s, dg, 4, 0));
  CHECK_THROWS(make_folds(s, dg, 1, 0));
}

TEST_CASE("training store drops exactly the held-out fold") {
  auto s = gene_store(10, 2);
  const auto dg = *s.find_relation("disease_gene");
  auto f = make_folds(s, dg, 5, 1);
  auto train = training_store(s, f, 2);
  CHECK(train.size() == s.size() - f.test_triples(2).size());
  CHECK(train.entities() == s.entities());
  for (const Triple& t : f.test_triples(2)) CHECK_FALSE(train.contains(t));
  for (const Triple& t : f.test_triples(3)) CHECK(train.contains(t));
}

TEST_CASE("folds.tsv round trip") {
  auto s = gene_store(6, 2);
  auto f = make_folds(s, *s.find_relation("disease_gene"), 3, 9);
  std::stringstream io;
  write_folds(io, f, s);
  auto g = read_folds(io, s);
  CHECK(g.fold_count() == 3);
  CHECK(g.target_relation() == f.target_relation());
  for (const auto& [t, k] : f.assignments()) CHECK(g.fold_of(t) == k);
}

TEST_CASE("remap by name onto a rebuilt vocabulary") {
  auto s = gene_store(6, 2);
  const auto dg = *s.find_relation("disease_gene");
  auto f = make_folds(s, dg, 3, 9);
  auto only_dg = filter_triples(s, [&](const Triple& t) { return t.relation == dg; }, true);
  auto g = remap_folds(f, s, only_dg);
  for (const auto& [t, k] : f.assignments()) {
    Triple u{*only_dg.find_entity(s.entity_name(t.head)), *only_dg.find_relation("disease_gene"),
             *only_dg.find_entity(s.entity_name(t.tail))};
    CHECK(g.fold_of(u) == k);
  }
}

}  // TEST_SUITE
