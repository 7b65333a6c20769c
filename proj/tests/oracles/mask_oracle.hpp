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

// Independent attention-mask reference: per-position labels expanded from
// the trees themselves, and checkers for the mask invariants.

#include <cstdint>
#include <string>
#include <vector>

#include "mmforge/message_tree.hpp"
#include "mmforge/random.hpp"

namespace oracle {

struct Position {
  int example;
  int branch;  // -1 for the prefix
  bool visual;
};

inline std::vector<Position> expand(const std::vector<mmforge::MessageTree>& trees) {
  std::vector<Position> out;
  for (int e = 0; e < static_cast<int>(trees.size()); ++e) {
    for (const auto& s : trees[e].prefix)
      for (std::int64_t i = 0; i < s.tokens; ++i) out.push_back({e, -1, s.kind == mmforge::TokenKind::Visual});
    for (int b = 0; b < static_cast<int>(trees[e].branches.size()); ++b)
      for (const auto& m : trees[e].branches[b])
        for (std::int64_t i = 0; i < m.tokens; ++i) out.push_back({e, b, false});
  }
  return out;
}

// Reference rule written out case by case.
inline bool reference_allows(const std::vector<Position>& pos, std::size_t q, std::size_t k) {
  const Position& a = pos[q];
  const Position& b = pos[k];
  if (a.example != b.example) return false;
  const bool q_prefix = a.branch < 0, k_prefix = b.branch < 0;
  if (q_prefix && k_prefix) return k <= q || (a.visual && b.visual);
  if (q_prefix && !k_prefix) return false;
  if (!q_prefix && k_prefix) return true;
  return a.branch == b.branch && k <= q;
}

inline std::vector<mmforge::MessageTree> random_trees(mmforge::Rng& rng, std::int64_t max_tokens) {
  using namespace mmforge;
  std::vector<MessageTree> trees;
  std::int64_t used = 0;
  const int examples = 1 + static_cast<int>(rng.below(4));
  for (int e = 0; e < examples; ++e) {
    std::vector<PrefixSegment> prefix;
    const int segments = static_cast<int>(rng.below(4));
    for (int s = 0; s < segments; ++s)
      prefix.push_back({rng.below(3) == 0 ? TokenKind::Text : TokenKind::Visual, 1 + static_cast<std::int64_t>(rng.below(20))});
    std::vector<Branch> branches(rng.below(5));
    for (auto& b : branches) {
      const int messages = 1 + static_cast<int>(rng.below(4));
      for (int m = 0; m < messages; ++m)
        b.push_back({m % 2 == 0 ? Role::User : Role::Assistant, 1 + static_cast<std::int64_t>(rng.below(12)), 0.0});
    }
    auto tree = build_tree(std::move(prefix), std::move(branches));
    if (tree.total_tokens() == 0) continue;
    if (used + tree.total_tokens() > max_tokens) break;
    used += tree.total_tokens();
    trees.push_back(std::move(tree));
  }
  return trees;
}

// Returns an empty string when every invariant holds, else the first failure.
inline std::string check_mask_invariants(const mmforge::DenseMask& m, const std::vector<Position>& pos) {
  const auto n = static_cast<std::size_t>(m.size());
  if (n != pos.size()) return "size";
  for (std::size_t q = 0; q < n; ++q) {
    if (!m.at(q, q)) return "reflexive";
    for (std::size_t k = 0; k < n; ++k) {
      const bool allowed = m.at(q, k);
      const Position& a = pos[q];
      const Position& b = pos[k];
      if (a.example != b.example) {
        if (allowed) return "cross-example";
        continue;
      }
      if (a.branch >= 0 && b.branch >= 0 && a.branch != b.branch && allowed) return "cross-branch";
      if (a.branch >= 0 && b.branch < 0 && !allowed) return "branch-to-prefix";
      if (a.branch < 0 && b.branch < 0 && a.visual && b.visual && !allowed) return "visual-complete";
      if (a.branch >= 0 && a.branch == b.branch && allowed != (k <= q)) return "branch-causal";
    }
  }
  return {};
}

}  // namespace oracle
