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

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdgene/folds.hpp"
#include "kdgene/model.hpp"
#include "kdgene/triple_store.hpp"

namespace kdgene {

inline constexpr int kDefaultCutoffs[] = {1, 3, 10, 50};

struct RankedItem {
  EntityId entity{};
  double score = 0.0;
};

struct RankingResult {
  EntityId head{};
  RelationId relation{};
  std::vector<RankedItem> ranked;   // descending score, ties by ascending id
  std::vector<EntityId> positives;  // held-out tails, ascending
};

// Orders an already filtered candidate list by descending score, breaking
// ties by ascending id. `scores` is indexed by entity id.
std::vector<RankedItem> order_candidates(std::span<const EntityId> candidates,
                                         std::span<const double> scores);

// Scores the pool minus the training tails of (head, relation).
RankingResult rank_query(const ModelParams& params, const TripleStore& train, EntityId head,
                         RelationId relation, std::span<const EntityId> pool,
                         std::vector<EntityId> positives = {},
                         kernels::Execution exec = kernels::Execution::serial);

// Pair-level: hits of (query, positive) in the top N over all pairs.
// Empty when there are no pairs.
std::optional<double> hit_ratio(std::span<const RankingResult> results, int n);
// Mean over queries with >= 1 positive of
// AP@N = Σ_{k<=N, item k positive} precision@k / min(|positives|, N).
std::optional<double> average_precision(const RankingResult& result, int n);
std::optional<double> mean_average_precision(std::span<const RankingResult> results, int n);

struct QueryMetrics {
  EntityId head{};
  std::size_t positives = 0;
  std::size_t candidates = 0;
  std::map<int, double> hits;  // hits in top N
  std::map<int, double> ap;
};

struct MetricReport {
  std::string fold;  // fold index, or "mean" for an aggregate
  std::map<int, double> hr;
  std::map<int, double> map;
  std::vector<QueryMetrics> per_query;
  std::size_t queries = 0;
  std::size_t test_pairs = 0;
  std::size_t cold_start_skipped = 0;  // head has no training triple
  std::size_t empty_skipped = 0;       // every candidate filtered out
};

MetricReport compute_metrics(std::span<const RankingResult> results,
                             std::span<const int> cutoffs = kDefaultCutoffs);

// Default pool: entities typed protein/gene when typing exists, otherwise
// all entities that never occur as head of `target`.
std::vector<EntityId> default_candidate_pool(const TripleStore& store, RelationId target);

struct FoldEvaluation {
  MetricReport report;
  std::vector<RankingResult> rankings;
};

// `store` is the full (non-augmented) store; the training side of `fold_id`
// is derived from it for filtering. Queries are grouped per head.
FoldEvaluation evaluate_fold(const ModelParams& params, const TripleStore& store,
                             const FoldSplit& folds, int fold_id, std::span<const EntityId> pool,
                             std::span<const int> cutoffs = kDefaultCutoffs,
                             kernels::Execution exec = kernels::Execution::serial);

// Unweighted mean of fold metrics.
MetricReport aggregate_folds(std::span<const MetricReport> folds);

// metrics.csv: fold,metric,N,value
void write_metrics_header(std::ostream& out);
void write_metrics(std::ostream& out, const MetricReport& report, std::string_view label = {});
// disease<TAB>rank<TAB>gene<TAB>score
void write_rankings(std::ostream& out, std::span<const RankingResult> rankings,
                    const TripleStore& store);

}  // namespace kdgene
