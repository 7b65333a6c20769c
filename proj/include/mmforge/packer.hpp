// Copyright 2026 The mmforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Pool-based packing of variable-length examples into sequences bounded by
// both an LLM token budget and a vision-encoder crop budget.

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmforge {

struct PackCandidate {
  std::string id;
  std::int64_t text_tokens = 1;  // all LLM tokens of the linearized example
  std::int64_t crops = 0;
  std::int64_t arrival_index = 0;
  bool truncated = false;
};

struct PackBudget {
  std::int64_t max_tokens = 16384;
  std::int64_t max_crops = 128;
  std::int64_t crop_weight = 30;
  std::int64_t quantum = 32;
  std::size_t pool_size = 48;

  static PackBudget sft() { return {}; }
  static PackBudget long_context() { return {36864, 384, 30, 32, 48}; }

  void validate() const;
};

struct PackedSequence {
  std::vector<std::string> ids;             // in arrival order
  std::vector<std::int64_t> arrival_indices;
  std::int64_t tokens = 0;
  std::int64_t quantized_tokens = 0;
  std::int64_t crops = 0;
  std::int64_t objective = 0;
};

// Rounds up to the next multiple of quantum.
std::int64_t quantize(std::int64_t tokens, std::int64_t quantum);

// Objective of a single example: tokens + crop_weight * crops.
std::int64_t pack_value(const PackCandidate& c, const PackBudget& budget);

bool fits(const PackCandidate& c, const PackBudget& budget);

// Exact optimum of sum(tokens) + crop_weight * sum(crops) subject to
// sum(quantize(tokens)) <= max_tokens and sum(crops) <= max_crops. Among
// optimal subsets the one with the most examples wins, then the one whose
// sorted arrival indices are lexicographically smallest.
PackedSequence solve(std::span<const PackCandidate> pool, const PackBudget& budget);

// Clips an over-long example to the token budget and flags it. Crops
// cannot be clipped.
PackCandidate truncate(PackCandidate candidate, const PackBudget& budget);

// Single-owner streaming packer. The pool is refilled to pool_size before
// every solve; once the source is exhausted the remaining pool is drained.
class PackStream {
 public:
  using Source = std::function<std::optional<PackCandidate>()>;

  PackStream(Source source, PackBudget budget);

  // Next packed sequence, or nullopt once every admitted example was emitted.
  std::optional<PackedSequence> next();

  std::size_t pool_size() const noexcept { return pool_.size(); }
  std::int64_t admitted() const noexcept { return next_arrival_; }

 private:
  void refill();

  Source source_;
  PackBudget budget_;
  std::vector<PackCandidate> pool_;
  std::int64_t next_arrival_ = 0;
  bool exhausted_ = false;
};

std::vector<PackedSequence> pack_all(std::span<const PackCandidate> candidates, const PackBudget& budget);

}  // namespace mmforge
