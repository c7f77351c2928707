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
#include <unordered_map>
#include <vector>

#include "kdgene/triple_store.hpp"

namespace kdgene {

// Partition of the target-relation triples into cross-validation folds.
// Triples of every other relation always stay in training.
class FoldSplit {
 public:
  FoldSplit() = default;
  FoldSplit(RelationId target, int fold_count, std::vector<std::pair<Triple, int>> assignments);

  RelationId target_relation() const { return target_; }
  int fold_count() const { return fold_count_; }
  const std::vector<std::pair<Triple, int>>& assignments() const { return assignments_; }

  std::optional<int> fold_of(const Triple& t) const;
  std::vector<Triple> test_triples(int fold) const;

 private:
  RelationId target_{};
  int fold_count_ = 0;
  std::vector<std::pair<Triple, int>> assignments_;
  std::unordered_map<Triple, int, TripleHash> lookup_;
};

// Random permutation under `seed`, then round-robin assignment.
FoldSplit make_folds(const TripleStore& store, RelationId target, int fold_count,
                     std::uint64_t seed);

// All triples of `store` except the held-out fold; identifiers preserved.
TripleStore training_store(const TripleStore& store, const FoldSplit& folds, int fold);

// Re-keys a split made on `from` onto the identifiers of `to` by name.
FoldSplit remap_folds(const FoldSplit& folds, const TripleStore& from, const TripleStore& to);

// folds.tsv: head<TAB>relation<TAB>tail<TAB>fold
void write_folds(std::ostream& out, const FoldSplit& folds, const TripleStore& store);
FoldSplit read_folds(std::istream& in, const TripleStore& store);

}  // namespace kdgene
