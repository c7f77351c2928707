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

#include "kdgene/enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace kdgene {

double log_binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double log_choose = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
  return log_choose + kd * std::log(p) + (nd - kd) * std::log1p(-p);
}

double log_binomial_upper_tail(std::uint64_t n, std::uint64_t k, double p) {
  if (p < 0.0 || p > 1.0 || std::isnan(p)) throw std::invalid_argument("probability outside [0, 1]");
  if (k == 0) return 0.0;
  if (k > n) return -std::numeric_limits<double>::infinity();
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return 0.0;
  // Terms rise up to the mode and fall after it; stop once they are
  // negligible against the running maximum.
  const double mode = std::floor((static_cast<double>(n) + 1.0) * p);
  double top = -std::numeric_limits<double>::infinity();
  double scaled = 0.0;  // Σ exp(term - top)
  for (std::uint64_t j = k; j <= n; ++j) {
    const double term = log_binomial_pmf(n, j, p);
    if (term > top) {
      scaled = scaled * std::exp(top - term) + 1.0;
      top = term;
    } else {
      scaled += std::exp(term - top);
    }
    if (static_cast<double>(j) > mode && term < top - 60.0) break;
  }
  return std::min(0.0, top + std::log(scaled));
}

double binomial_upper_tail(std::uint64_t n, std::uint64_t k, double p) {
  return std::exp(log_binomial_upper_tail(n, k, p));
}

EnrichmentResult link_enrichment(const TripleStore& ppi, RelationId relation,
                                 std::span<const EntityId> set_a, std::span<const EntityId> set_b) {
  if (set_a.empty() || set_b.empty()) throw std::invalid_argument("gene sets must be non-empty");
  for (auto span : {set_a, set_b}) {
    for (EntityId e : span) {
      if (index(e) >= ppi.num_entities()) throw std::invalid_argument("gene id not in the PPI store");
    }
  }
  std::set<EntityId> combined(set_a.begin(), set_a.end());
  combined.insert(set_b.begin(), set_b.end());

  std::set<std::pair<EntityId, EntityId>> edges;
  std::unordered_set<std::uint32_t> genes;
  for (const Triple& t : ppi.triples()) {
    if (t.relation != relation || t.head == t.tail) continue;
    edges.emplace(std::min(t.head, t.tail), std::max(t.head, t.tail));
  }
  EnrichmentResult r;
  for (const auto& [u, v] : edges) {
    genes.insert(static_cast<std::uint32_t>(index(u)));
    genes.insert(static_cast<std::uint32_t>(index(v)));
    if (combined.count(u) && combined.count(v)) ++r.observed_links;
  }
  r.set_a_size = std::set<EntityId>(set_a.begin(), set_a.end()).size();
  r.set_b_size = std::set<EntityId>(set_b.begin(), set_b.end()).size();
  r.combined_size = combined.size();
  r.pair_count = static_cast<std::uint64_t>(r.combined_size) * (r.combined_size - 1) / 2;
  r.background_edges = edges.size();
  r.background_genes = genes.size();
  const double gene_pairs = static_cast<double>(r.background_genes) *
                            (static_cast<double>(r.background_genes) - 1.0) / 2.0;
  r.density = gene_pairs > 0 ? static_cast<double>(r.background_edges) / gene_pairs : 0.0;
  r.expected_links = static_cast<double>(r.pair_count) * r.density;
  const double log_p = log_binomial_upper_tail(r.pair_count, r.observed_links, r.density);
  r.p_value = std::exp(log_p);
  r.log10_p_value = log_p / std::log(10.0);
  return r;
}

void write_enrichment_report(std::ostream& out, const EnrichmentResult& r) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out.precision(10);
  out << "observed_links\t" << r.observed_links << '\n'
      << "expected_links\t" << r.expected_links << '\n'
      << "p_value\t" << r.p_value << '\n'
      << "log10_p_value\t" << r.log10_p_value << '\n'
      << "set_a_size\t" << r.set_a_size << '\n'
      << "set_b_size\t" << r.set_b_size << '\n'
      << "combined_size\t" << r.combined_size << '\n'
      << "pair_count\t" << r.pair_count << '\n'
      << "background_edges\t" << r.background_edges << '\n'
      << "background_genes\t" << r.background_genes << '\n'
      << "background_density\t" << r.density << '\n'
      << "null_model\tbinomial(pair_count, background_density), upper tail P[X >= observed]\n";
  out.flags(flags);
  out.precision(prec);
}

}  // namespace kdgene
