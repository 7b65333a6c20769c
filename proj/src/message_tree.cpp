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

#include "mmforge/message_tree.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <string>

#include "mmforge/error.hpp"

namespace mmforge {

namespace {

// Examples never see each other. Branch keys are causal and private to their
// branch. Prefix keys are visible to every branch of the example; inside the
// prefix, visual tokens see each other in both directions and everything
// else is causal.
bool attends(const TokenInfo& qi, const TokenInfo& ki, std::int64_t q, std::int64_t k) {
  if (qi.example != ki.example) return false;
  if (ki.branch != kPrefixBranch) return qi.branch == ki.branch && k <= q;
  if (qi.branch != kPrefixBranch) return true;
  return k <= q || (qi.kind == TokenKind::Visual && ki.kind == TokenKind::Visual);
}

}  // namespace

std::int64_t MessageTree::prefix_tokens() const {
  std::int64_t n = 0;
  for (const auto& s : prefix) n += s.tokens;
  return n;
}

std::int64_t MessageTree::total_tokens() const {
  std::int64_t n = prefix_tokens();
  for (const auto& b : branches)
    for (const auto& m : b) n += m.tokens;
  return n;
}

MessageTree build_tree(std::vector<PrefixSegment> prefix, std::vector<Branch> annotations) {
  for (const auto& s : prefix)
    if (s.tokens <= 0) fail(ErrorCode::InvalidArgument, "prefix segments need a positive token count");
  for (std::size_t b = 0; b < annotations.size(); ++b) {
    if (annotations[b].empty()) fail(ErrorCode::EmptyAnnotation, "annotation " + std::to_string(b) + " has no messages");
    for (const auto& m : annotations[b]) {
      if (m.tokens <= 0) fail(ErrorCode::InvalidArgument, "messages need a positive token count");
      if (m.weight < 0.0 || (m.role == Role::User && m.weight != 0.0))
        fail(ErrorCode::InvalidArgument, "only assistant messages carry loss weight");
    }
  }
  return MessageTree{std::move(prefix), std::move(annotations)};
}

LinearizedExample linearize(const MessageTree& tree, int example_id) {
  LinearizedExample out;
  auto push = [&](std::int64_t len, int branch, TokenKind kind, Role role, double weight) {
    out.spans.push_back({out.total_len, len, example_id, branch, kind, role, weight});
    out.total_len += len;
  };
  for (const auto& s : tree.prefix) push(s.tokens, kPrefixBranch, s.kind, Role::User, 0.0);
  for (std::size_t b = 0; b < tree.branches.size(); ++b)
    for (const auto& m : tree.branches[b]) push(m.tokens, static_cast<int>(b), TokenKind::Text, m.role, m.weight);
  return out;
}

PackedLayout::PackedLayout(std::span<const LinearizedExample> examples) {
  example_offsets_.push_back(0);
  for (std::size_t e = 0; e < examples.size(); ++e) {
    std::int64_t cursor = 0;
    for (const auto& span : examples[e].spans) {
      if (span.start != cursor || span.length <= 0)
        fail(ErrorCode::InvalidArgument, "linearized spans must be contiguous and non-empty");
      TokenInfo info{static_cast<int>(e), span.branch, span.kind};
      const bool merges = !runs_.empty() && runs_.back().info.example == info.example &&
                          runs_.back().info.branch == info.branch && runs_.back().info.kind == info.kind;
      if (!merges) runs_.push_back({total_ + cursor, info});
      cursor += span.length;
    }
    if (cursor != examples[e].total_len) fail(ErrorCode::InvalidArgument, "spans do not cover the example");
    total_ += cursor;
    example_offsets_.push_back(total_);
  }
}

TokenInfo PackedLayout::info(std::int64_t position) const {
  if (position < 0 || position >= total_)
    fail(ErrorCode::IndexOutOfRange, "position " + std::to_string(position) + " outside packed length");
  auto it = std::upper_bound(runs_.begin(), runs_.end(), position,
                             [](std::int64_t p, const Run& r) { return p < r.start; });
  return std::prev(it)->info;
}

bool PackedLayout::allows(std::int64_t q, std::int64_t k) const { return attends(info(q), info(k), q, k); }

DenseMask::DenseMask(std::int64_t n, std::vector<std::int64_t> example_offsets)
    : n_(n), offsets_(std::move(example_offsets)), bits_(static_cast<std::size_t>(n * n), 0) {}

DenseMask build_mask(const PackedLayout& layout, std::int64_t cap) {
  const std::int64_t n = layout.size();
  if (n > cap) fail(ErrorCode::TooLarge, "packed length " + std::to_string(n) + " exceeds mask cap");
  DenseMask mask(n, layout.example_offsets());
  std::vector<TokenInfo> infos;
  infos.reserve(static_cast<std::size_t>(n));
  for (std::int64_t p = 0; p < n; ++p) infos.push_back(layout.info(p));
  for (std::int64_t q = 0; q < n; ++q) {
    const TokenInfo& qi = infos[q];
    for (std::int64_t k = 0; k < n; ++k) mask.set(q, k, attends(qi, infos[k], q, k));
  }
  return mask;
}

namespace {

void put_u32(std::ostream& out, std::uint64_t v) {
  if (v > 0xffffffffu) fail(ErrorCode::TooLarge, "value does not fit the mask header");
  std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                        static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) fail(ErrorCode::MalformedSyntax, "truncated mask file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_mask(std::ostream& out, const DenseMask& mask) {
  const std::int64_t n = mask.size();
  out.write("MMSK", 4);
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint64_t>(n));
  put_u32(out, static_cast<std::uint64_t>(n));
  const auto& offsets = mask.example_offsets();
  put_u32(out, offsets.empty() ? 0 : offsets.size() - 1);
  for (auto o : offsets) put_u32(out, static_cast<std::uint64_t>(o));
  std::vector<char> packed(static_cast<std::size_t>((n * n + 7) / 8), 0);
  for (std::int64_t i = 0; i < n * n; ++i)
    if (mask.at(i / n, i % n)) packed[static_cast<std::size_t>(i / 8)] |= static_cast<char>(1u << (i % 8));
  out.write(packed.data(), static_cast<std::streamsize>(packed.size()));
}

DenseMask read_mask(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || std::string(magic.data(), 4) != "MMSK")
    fail(ErrorCode::MalformedSyntax, "not a mask file");
  if (get_u32(in) != 1) fail(ErrorCode::MalformedSyntax, "unsupported mask version");
  std::int64_t rows = get_u32(in), cols = get_u32(in);
  if (rows != cols) fail(ErrorCode::MalformedSyntax, "mask must be square");
  std::uint32_t examples = get_u32(in);
  std::vector<std::int64_t> offsets;
  for (std::uint32_t i = 0; i <= examples; ++i) offsets.push_back(get_u32(in));
  DenseMask mask(rows, std::move(offsets));
  std::vector<char> packed(static_cast<std::size_t>((rows * cols + 7) / 8));
  if (!in.read(packed.data(), static_cast<std::streamsize>(packed.size())))
    fail(ErrorCode::MalformedSyntax, "truncated mask bits");
  for (std::int64_t i = 0; i < rows * cols; ++i)
    mask.set(i / cols, i % cols, (static_cast<unsigned char>(packed[static_cast<std::size_t>(i / 8)]) >> (i % 8)) & 1u);
  return mask;
}

}  // namespace mmforge
