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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace kdgene {

// Dense identifiers, contiguous from 0 in vocabulary order.
enum class EntityId : std::uint32_t {};
enum class RelationId : std::uint32_t {};

constexpr std::size_t index(EntityId e) { return static_cast<std::size_t>(e); }
constexpr std::size_t index(RelationId r) { return static_cast<std::size_t>(r); }
constexpr EntityId entity_id(std::size_t i) { return static_cast<EntityId>(i); }
constexpr RelationId relation_id(std::size_t i) { return static_cast<RelationId>(i); }

struct Triple {
  EntityId head{};
  RelationId relation{};
  EntityId tail{};

  friend constexpr auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t key = static_cast<std::uint64_t>(index(t.head));
    key = key * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(index(t.relation));
    key = key * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(index(t.tail));
    return std::hash<std::uint64_t>{}(key);
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the loss or a parameter leaves the finite range.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kdgene
