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
#include <span>

#include "kdgene/triple_store.hpp"

namespace kdgene {

double log_binomial_pmf(std::uint64_t n, std::uint64_t k, double p);
// log P[X >= k] for X ~ Binomial(n, p), summed in log space.
double log_binomial_upper_tail(std::uint64_t n, std::uint64_t k, double p);
double binomial_upper_tail(std::uint64_t n, std::uint64_t k, double p);

struct EnrichmentResult {
  std::size_t set_a_size = 0;
  std::size_t set_b_size = 0;
  std::size_t combined_size = 0;     // |A ∪ B|
  std::uint64_t pair_count = 0;      // C(|A ∪ B|, 2)
  std::uint64_t observed_links = 0;  // PPI edges inside A ∪ B
  std::uint64_t background_edges = 0;
  std::uint64_t background_genes = 0;
  double density = 0.0;              // edges / C(genes, 2)
  double expected_links = 0.0;
  double p_value = 1.0;
  double log10_p_value = 0.0;
};

// Undirected, deduplicated edges of `relation` in `ppi`; self-loops ignored.
// Null model: every gene pair is linked independently with the background
// density of the whole network.
EnrichmentResult link_enrichment(const TripleStore& ppi, RelationId relation,
                                 std::span<const EntityId> set_a, std::span<const EntityId> set_b);

void write_enrichment_report(std::ostream& out, const EnrichmentResult& result);

}  // namespace kdgene
