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

#include <optional>
#include <span>

#include "kdgene/evaluator.hpp"

namespace kdgene::oracle {

// Straight-line re-statements of HR@N and MAP@N with nested loops and no
// shared helpers, used to cross-check the evaluator.
std::optional<double> naive_hit_ratio(std::span<const RankingResult> results, int n);
std::optional<double> naive_mean_average_precision(std::span<const RankingResult> results, int n);

}  // namespace kdgene::oracle
