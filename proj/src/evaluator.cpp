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

#include "kdgene/evaluator.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <ostream>

namespace kdgene {

namespace {

bool is_positive(const RankingResult& r, EntityId e) {
  return std::binary_search(r.positives.begin(), r.positives.end(), e);
}

std::size_t hits_at(const RankingResult& r, int n) {
  const std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(n), r.ranked.size());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < depth; ++k) hits += is_positive(r, r.ranked[k].entity) ? 1 : 0;
  return hits;
}

void check_cutoff(int n) {
  if (n < 1) throw std::invalid_argument("cutoff N must be >= 1");
}

}  // namespace

std::vector<RankedItem> order_candidates(std::span<const EntityId> candidates,
                                         std::span<const double> scores) {
  std::vector<RankedItem> out;
  out.reserve(candidates.size());
  for (EntityId e : candidates) out.push_back({e, scores[index(e)]});
  std::sort(out.begin(), out.end(), [](const RankedItem& a, const RankedItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity < b.entity;
  });
  return out;
}

RankingResult rank_query(const ModelParams& params, const TripleStore& train, EntityId head,
                         RelationId relation, std::span<const EntityId> pool,
                         std::vector<EntityId> positives, kernels::Execution exec) {
  RankingResult result;
  result.head = head;
  result.relation = relation;
  std::sort(positives.begin(), positives.end());
  positives.erase(std::unique(positives.begin(), positives.end()), positives.end());
  result.positives = std::move(positives);
  const auto candidates = filtered_candidates(train, head, relation, pool);
  if (candidates.empty()) return result;
  std::vector<double> scores(params.shape().num_entities);
  score_all_tails(params, head, relation, scores, exec);
  result.ranked = order_candidates(candidates, scores);
  return result;
}

std::optional<double> hit_ratio(std::span<const RankingResult> results, int n) {
  check_cutoff(n);
  std::size_t pairs = 0;
  std::size_t hits = 0;
  for (const auto& r : results) {
    if (r.ranked.empty()) continue;
    pairs += r.positives.size();
    hits += hits_at(r, n);
  }
  if (pairs == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(pairs);
}

std::optional<double> average_precision(const RankingResult& r, int n) {
  check_cutoff(n);
  if (r.positives.empty()) return std::nullopt;
  const std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(n), r.ranked.size());
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < depth; ++k) {
    if (!is_positive(r, r.ranked[k].entity)) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(std::min<std::size_t>(r.positives.size(), static_cast<std::size_t>(n)));
}

std::optional<double> mean_average_precision(std::span<const RankingResult> results, int n) {
  check_cutoff(n);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : results) {
    if (r.ranked.empty()) continue;
    if (auto ap = average_precision(r, n)) {
      sum += *ap;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

MetricReport compute_metrics(std::span<const RankingResult> results, std::span<const int> cutoffs) {
  MetricReport report;
  for (const auto& r : results) {
    if (r.ranked.empty()) {
      ++report.empty_skipped;
      continue;
    }
    ++report.queries;
    report.test_pairs += r.positives.size();
    QueryMetrics q;
    q.head = r.head;
    q.positives = r.positives.size();
    q.candidates = r.ranked.size();
    for (int n : cutoffs) {
      q.hits[n] = static_cast<double>(hits_at(r, n));
      if (auto ap = average_precision(r, n)) q.ap[n] = *ap;
    }
    report.per_query.push_back(std::move(q));
  }
  for (int n : cutoffs) {
    if (auto v = hit_ratio(results, n)) report.hr[n] = *v;
    if (auto v = mean_average_precision(results, n)) report.map[n] = *v;
  }
  return report;
}

std::vector<EntityId> default_candidate_pool(const TripleStore& store, RelationId target) {
  std::vector<EntityId> pool;
  if (store.has_types()) {
    for (std::size_t e = 0; e < store.num_entities(); ++e) {
      const auto& type = store.entity_type(entity_id(e));
      if (type == "protein" || type == "gene") pool.push_back(entity_id(e));
    }
    if (!pool.empty()) return pool;
  }
  std::vector<bool> is_head(store.num_entities(), false);
  for (const Triple& t : store.triples()) {
    if (t.relation == target) is_head[index(t.head)] = true;
  }
  for (std::size_t e = 0; e < store.num_entities(); ++e) {
    if (!is_head[e]) pool.push_back(entity_id(e));
  }
  return pool;
}

FoldEvaluation evaluate_fold(const ModelParams& params, const TripleStore& store,
                             const FoldSplit& folds, int fold_id, std::span<const EntityId> pool,
                             std::span<const int> cutoffs, kernels::Execution exec) {
  const TripleStore train = training_store(store, folds, fold_id);
  std::vector<bool> seen(store.num_entities(), false);
  for (const Triple& t : train.triples()) {
    seen[index(t.head)] = true;
    seen[index(t.tail)] = true;
  }
  std::map<EntityId, std::vector<EntityId>> by_head;
  for (const Triple& t : folds.test_triples(fold_id)) by_head[t.head].push_back(t.tail);

  std::vector<std::pair<EntityId, std::vector<EntityId>>> queries;
  std::size_t cold = 0;
  for (auto& [head, tails] : by_head) {
    if (!seen[index(head)]) {
      ++cold;
      continue;
    }
    queries.emplace_back(head, std::move(tails));
  }

  FoldEvaluation out;
  out.rankings.resize(queries.size());
  const RelationId relation = folds.target_relation();
  const auto count = static_cast<std::int64_t>(queries.size());
  if (exec == kernels::Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t q = 0; q < count; ++q) {
      out.rankings[q] = rank_query(params, train, queries[q].first, relation, pool, queries[q].second);
    }
  } else {
    for (std::int64_t q = 0; q < count; ++q) {
      out.rankings[q] = rank_query(params, train, queries[q].first, relation, pool, queries[q].second);
    }
  }
  out.report = compute_metrics(out.rankings, cutoffs);
  out.report.fold = std::to_string(fold_id);
  out.report.cold_start_skipped = cold;
  return out;
}

MetricReport aggregate_folds(std::span<const MetricReport> folds) {
  MetricReport out;
  out.fold = "mean";
  std::map<int, std::pair<double, int>> hr, map;
  for (const auto& f : folds) {
    for (auto [n, v] : f.hr) {
      hr[n].first += v;
      hr[n].second += 1;
    }
    for (auto [n, v] : f.map) {
      map[n].first += v;
      map[n].second += 1;
    }
    out.queries += f.queries;
    out.test_pairs += f.test_pairs;
    out.cold_start_skipped += f.cold_start_skipped;
    out.empty_skipped += f.empty_skipped;
  }
  for (auto [n, acc] : hr) out.hr[n] = acc.first / acc.second;
  for (auto [n, acc] : map) out.map[n] = acc.first / acc.second;
  return out;
}

namespace {
std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}
}  // namespace

void write_metrics_header(std::ostream& out) { out << "fold,metric,N,value\n"; }

void write_metrics(std::ostream& out, const MetricReport& report, std::string_view label) {
  const std::string name = label.empty() ? report.fold : std::string(label);
  for (auto [n, v] : report.hr) out << name << ",HR," << n << ',' << format_double(v) << '\n';
  for (auto [n, v] : report.map) out << name << ",MAP," << n << ',' << format_double(v) << '\n';
}

void write_rankings(std::ostream& out, std::span<const RankingResult> rankings,
                    const TripleStore& store) {
  for (const auto& r : rankings) {
    for (std::size_t k = 0; k < r.ranked.size(); ++k) {
      out << store.entity_name(r.head) << '\t' << (k + 1) << '\t'
          << store.entity_name(r.ranked[k].entity) << '\t' << format_double(r.ranked[k].score) << '\n';
    }
  }
}

}  // namespace kdgene
