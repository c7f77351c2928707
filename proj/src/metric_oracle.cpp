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

#include "kdgene/metric_oracle.hpp"

namespace kdgene::oracle {

std::optional<double> naive_hit_ratio(std::span<const RankingResult> results, int n) {
  long pairs = 0;
  long hits = 0;
  for (const RankingResult& r : results) {
    if (r.ranked.empty()) continue;
    for (EntityId p : r.positives) {
      ++pairs;
      for (int k = 0; k < n && k < static_cast<int>(r.ranked.size()); ++k) {
        if (r.ranked[k].entity == p) ++hits;
      }
    }
  }
  if (pairs == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(pairs);
}

std::optional<double> naive_mean_average_precision(std::span<const RankingResult> results, int n) {
  double total = 0.0;
  long queries = 0;
  for (const RankingResult& r : results) {
    if (r.ranked.empty() || r.positives.empty()) continue;
    double ap = 0.0;
    for (int k = 0; k < n && k < static_cast<int>(r.ranked.size()); ++k) {
      bool relevant = false;
      for (EntityId p : r.positives) relevant = relevant || r.ranked[k].entity == p;
      if (!relevant) continue;
      int found = 0;
      for (int m = 0; m <= k; ++m) {
        for (EntityId p : r.positives) found += r.ranked[m].entity == p ? 1 : 0;
      }
      ap += static_cast<double>(found) / static_cast<double>(k + 1);
    }
    const int denom = static_cast<int>(r.positives.size()) < n ? static_cast<int>(r.positives.size()) : n;
    total += ap / denom;
    ++queries;
  }
  if (queries == 0) return std::nullopt;
  return total / static_cast<double>(queries);
}

}  // namespace kdgene::oracle
