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

#include "kdgene/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace kdgene {

namespace {

constexpr std::array<char, 4> kMagic = {'K', 'D', 'G', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes, sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw std::runtime_error("checkpoint truncated");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

std::uint32_t encode_cell(const ModelShape& s) {
  switch (s.scorer) {
    case ScorerKind::cp: return 0;
    case ScorerKind::distmult: return 1;
    case ScorerKind::kdgene: return 2 + static_cast<std::uint32_t>(s.cell);
  }
  return 0;
}

void decode_cell(std::uint32_t code, ModelShape& s) {
  if (code == 0) {
    s.scorer = ScorerKind::cp;
  } else if (code == 1) {
    s.scorer = ScorerKind::distmult;
  } else if (code <= 4) {
    s.scorer = ScorerKind::kdgene;
    s.cell = static_cast<CellKind>(code - 2);
  } else {
    throw std::runtime_error("checkpoint: unknown cell kind " + std::to_string(code));
  }
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& l : lines) out << l << '\n';
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams& params) {
  const auto& s = params.shape();
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, s.num_entities);
  put_le<std::uint64_t>(out, s.num_relations);
  put_le<std::uint64_t>(out, s.entity_dim);
  put_le<std::uint64_t>(out, s.relation_dim);
  put_le<std::uint32_t>(out, encode_cell(s));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.output_mode));
  for (double v : params.values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw std::runtime_error("checkpoint write failed");
}

ModelParams read_checkpoint(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not a KDG1 checkpoint");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  ModelShape s;
  s.num_entities = get_le<std::uint64_t>(in);
  s.num_relations = get_le<std::uint64_t>(in);
  s.entity_dim = get_le<std::uint64_t>(in);
  s.relation_dim = get_le<std::uint64_t>(in);
  decode_cell(get_le<std::uint32_t>(in), s);
  const auto mode = get_le<std::uint32_t>(in);
  if (mode > 1) throw std::runtime_error("checkpoint: unknown output mode");
  s.output_mode = static_cast<OutputMode>(mode);
  ModelParams params(s);
  for (double& v : params.values()) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
  if (in.peek() != std::char_traits<char>::eof()) throw std::runtime_error("checkpoint has trailing bytes");
  return params;
}

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const CheckpointVocabulary& vocabulary) {
  if (vocabulary.entities.size() != params.shape().num_entities ||
      vocabulary.relations.size() != params.shape().num_relations) {
    throw std::invalid_argument("vocabulary size does not match the model");
  }
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_checkpoint(out, params);
  }
  write_lines(path + ".entities.tsv", vocabulary.entities);
  write_lines(path + ".relations.tsv", vocabulary.relations);
}

ModelParams load_checkpoint(const std::string& path, CheckpointVocabulary* vocabulary) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  ModelParams params = read_checkpoint(in);
  if (vocabulary) {
    vocabulary->entities = read_lines(path + ".entities.tsv");
    vocabulary->relations = read_lines(path + ".relations.tsv");
    if (vocabulary->entities.size() != params.shape().num_entities ||
        vocabulary->relations.size() != params.shape().num_relations) {
      throw std::runtime_error("checkpoint vocabulary does not match " + path);
    }
  }
  return params;
}

}  // namespace kdgene
