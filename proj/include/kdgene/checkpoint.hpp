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
#include <string>
#include <vector>

#include "kdgene/model.hpp"

namespace kdgene {

// Binary layout, little-endian:
//   "KDG1" | u32 version | u64 |E| | u64 |R| | u64 d_e | u64 d_r |
//   u32 cell kind | u32 output mode | f64 payload in ParamLayout order.
// Cell kind: 0 none (cp), 1 none (distmult), 2 lstm, 3 gru, 4 rnn.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const ModelParams& params);
ModelParams read_checkpoint(std::istream& in);

struct CheckpointVocabulary {
  std::vector<std::string> entities;
  std::vector<std::string> relations;
};

// Writes `path` plus `path.entities.tsv` and `path.relations.tsv`.
void save_checkpoint(const std::string& path, const ModelParams& params,
                     const CheckpointVocabulary& vocabulary);
ModelParams load_checkpoint(const std::string& path, CheckpointVocabulary* vocabulary = nullptr);

}  // namespace kdgene
