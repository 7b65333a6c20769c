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

#include <doctest.h>

#include <sstream>

#include "../oracles/mask_oracle.hpp"
#include "mmforge/error.hpp"
#include "mmforge/message_tree.hpp"

using namespace mmforge;

namespace {

Branch qa(std::int64_t q, std::int64_t a) { return {{Role::User, q, 0.0}, {Role::Assistant, a, 1.0}}; }

}  // namespace

TEST_CASE("build tree keeps annotation order") {
  auto t = build_tree({{TokenKind::Visual, 83}}, {qa(3, 7), qa(4, 8), qa(1, 1), qa(2, 2)});
  CHECK(t.branches.size() == 4);
  CHECK(t.branches[1][0].tokens == 4);
  CHECK(build_tree({{TokenKind::Visual, 10}}, {}).branches.empty());
  CHECK_THROWS_AS(build_tree({{TokenKind::Visual, 10}}, {Branch{}}), Error);
  CHECK_THROWS_AS(build_tree({{TokenKind::Visual, 0}}, {}), Error);
  CHECK_THROWS_AS(build_tree({}, {{{Role::User, 3, 0.5}}}), Error);
  try {
    build_tree({}, {qa(1, 1), Branch{}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyAnnotation);
  }
}

TEST_CASE("linearize lays out prefix then branches") {
  auto t = build_tree({{TokenKind::Visual, 83}}, {{{Role::User, 10, 0.0}}, {{Role::Assistant, 12, 0.5}}});
  auto lin = linearize(t, 3);
  CHECK(lin.total_len == 105);
  REQUIRE(lin.spans.size() == 3);
  CHECK(lin.spans[0].branch == kPrefixBranch);
  CHECK(lin.spans[1].branch == 0);
  CHECK(lin.spans[2].branch == 1);
  CHECK(lin.spans[2].start == 93);
  CHECK(lin.spans[2].weight == 0.5);
  CHECK(lin.spans[2].example_id == 3);
  CHECK(linearize(build_tree({{TokenKind::Visual, 83}}, {})).total_len == 83);
}

TEST_CASE("linearized spans cover the example exactly") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    for (const auto& tree : oracle::random_trees(rng, 400)) {
      const auto lin = linearize(tree);
      std::int64_t cursor = 0;
      for (const auto& s : lin.spans) {
        CHECK(s.start == cursor);
        CHECK(s.length > 0);
        cursor += s.length;
      }
      CHECK(cursor == lin.total_len);
      CHECK(lin.total_len == tree.total_tokens());
    }
  }
}

TEST_CASE("attention predicate cases") {
  // Example 0: 4 visual, 2 text prefix, branch A (3), branch B (2). Example 1: 3 visual, branch (2).
  auto t0 = build_tree({{TokenKind::Visual, 4}, {TokenKind::Text, 2}}, {{{Role::User, 3, 0.0}}, {{Role::User, 2, 0.0}}});
  auto t1 = build_tree({{TokenKind::Visual, 3}}, {{{Role::User, 2, 0.0}}});
  std::vector<LinearizedExample> ex{linearize(t0, 0), linearize(t1, 1)};
  PackedLayout layout(ex);
  CHECK(layout.size() == 16);
  CHECK(layout.example_count() == 2);
  CHECK(layout.example_offset(1) == 11);

  CHECK_FALSE(layout.allows(12, 3));  // other example
  CHECK_FALSE(layout.allows(9, 7));   // branch B to branch A
  CHECK(layout.allows(0, 3));         // visual forward
  CHECK(layout.allows(3, 0));
  CHECK_FALSE(layout.allows(4, 5));   // prefix text stays causal
  CHECK(layout.allows(5, 4));
  CHECK_FALSE(layout.allows(0, 4));   // visual query to later text key
  CHECK(layout.allows(4, 0));
  CHECK(layout.allows(7, 6));         // causal inside branch
  CHECK_FALSE(layout.allows(6, 7));
  CHECK(layout.allows(9, 5));         // branch sees the whole prefix
  CHECK(layout.allows(9, 0));
  CHECK_FALSE(layout.allows(2, 6));   // prefix never sees branches
  CHECK_THROWS_AS(layout.allows(16, 0), Error);
  CHECK_THROWS_AS(layout.allows(0, -1), Error);
}

TEST_CASE("single text-only linear conversation gives a causal mask") {
  auto t = build_tree({}, {{{Role::User, 5, 0.0}, {Role::Assistant, 4, 1.0}}});
  std::vector<LinearizedExample> ex{linearize(t)};
  const auto m = build_mask(PackedLayout(ex));
  for (std::int64_t q = 0; q < 9; ++q)
    for (std::int64_t k = 0; k < 9; ++k) CHECK(m.at(q, k) == (k <= q));
}

TEST_CASE("two packed examples leave the cross-branch and cross-example blocks empty") {
  // Example 0: visual prefix with two QA branches; example 1: visual prefix with one.
  auto t0 = build_tree({{TokenKind::Visual, 6}}, {qa(2, 3), qa(2, 2)});
  auto t1 = build_tree({{TokenKind::Visual, 4}}, {qa(2, 2)});
  std::vector<LinearizedExample> ex{linearize(t0, 0), linearize(t1, 1)};
  const auto m = build_mask(PackedLayout(ex));
  const std::int64_t a0 = 6, b0 = 11, e1 = 15, end = m.size();
  for (std::int64_t q = b0; q < e1; ++q)
    for (std::int64_t k = a0; k < b0; ++k) CHECK_FALSE(m.at(q, k));
  for (std::int64_t q = e1; q < end; ++q)
    for (std::int64_t k = 0; k < e1; ++k) CHECK_FALSE(m.at(q, k));
  CHECK(oracle::check_mask_invariants(m, oracle::expand({t0, t1})).empty());
}

TEST_CASE("dense mask equals the reference rule and satisfies every invariant") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto trees = oracle::random_trees(rng, 400);
    std::vector<LinearizedExample> ex;
    for (std::size_t e = 0; e < trees.size(); ++e) ex.push_back(linearize(trees[e], static_cast<int>(e)));
    PackedLayout layout(ex);
    const auto m = build_mask(layout);
    const auto pos = oracle::expand(trees);
    REQUIRE(static_cast<std::size_t>(m.size()) == pos.size());
    bool same = true;
    for (std::size_t q = 0; q < pos.size(); ++q)
      for (std::size_t k = 0; k < pos.size(); ++k)
        same = same && m.at(static_cast<std::int64_t>(q), static_cast<std::int64_t>(k)) == oracle::reference_allows(pos, q, k);
    CHECK(same);
    CHECK(oracle::check_mask_invariants(m, pos) == "");
  }
}

TEST_CASE("mask cap and binary export") {
  auto t = build_tree({{TokenKind::Visual, 5}, {TokenKind::Text, 2}}, {qa(2, 3)});
  std::vector<LinearizedExample> ex{linearize(t, 0), linearize(t, 1)};
  PackedLayout layout(ex);
  CHECK_THROWS_AS(build_mask(layout, 10), Error);
  const auto m = build_mask(layout);

  std::stringstream buf;
  write_mask(buf, m);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "MMSK");
  CHECK(bytes.size() == 4 + 4 * 4 + 3 * 4 + (24 * 24 + 7) / 8);
  CHECK(static_cast<unsigned char>(bytes[8]) == 24);  // rows, little-endian
  CHECK(static_cast<unsigned char>(bytes[16]) == 2);  // examples
  CHECK(static_cast<unsigned char>(bytes[24]) == 12); // second offset
  // Position (0, 0) is bit 0 of the first data byte.
  CHECK((static_cast<unsigned char>(bytes[32]) & 1u) == 1u);
  const auto back = read_mask(buf);
  CHECK(back == m);

  std::stringstream bad("MMSX");
  CHECK_THROWS_AS(read_mask(bad), Error);
}
