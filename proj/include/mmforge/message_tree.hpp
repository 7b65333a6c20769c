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

// Message trees: a shared visual prefix followed by independent annotation
// branches, linearized into one sequence. Several linearized examples can be
// packed back to back; PackedLayout answers which positions may attend to
// which.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace mmforge {

enum class TokenKind { Visual, Text };
enum class Role { User, Assistant };

struct PrefixSegment {
  TokenKind kind = TokenKind::Visual;
  std::int64_t tokens = 0;
};

struct Message {
  Role role = Role::User;
  std::int64_t tokens = 0;
  double weight = 0.0;  // loss weight; only assistant messages may be > 0
};

using Branch = std::vector<Message>;

struct MessageTree {
  std::vector<PrefixSegment> prefix;
  std::vector<Branch> branches;

  std::int64_t prefix_tokens() const;
  std::int64_t total_tokens() const;
};

MessageTree build_tree(std::vector<PrefixSegment> prefix, std::vector<Branch> annotations);

inline constexpr int kPrefixBranch = -1;

struct Span {
  std::int64_t start = 0;
  std::int64_t length = 0;
  int example_id = 0;
  int branch = kPrefixBranch;
  TokenKind kind = TokenKind::Text;
  Role role = Role::User;
  double weight = 0.0;
};

struct LinearizedExample {
  std::int64_t total_len = 0;
  std::vector<Span> spans;  // contiguous, covering [0, total_len)
};

LinearizedExample linearize(const MessageTree& tree, int example_id = 0);

struct TokenInfo {
  int example = 0;
  int branch = kPrefixBranch;
  TokenKind kind = TokenKind::Text;
};

class PackedLayout {
 public:
  explicit PackedLayout(std::span<const LinearizedExample> examples);

  std::int64_t size() const noexcept { return total_; }
  std::size_t example_count() const noexcept { return example_offsets_.size() - 1; }
  // example i occupies [offset(i), offset(i + 1))
  std::int64_t example_offset(std::size_t i) const { return example_offsets_.at(i); }
  const std::vector<std::int64_t>& example_offsets() const noexcept { return example_offsets_; }

  TokenInfo info(std::int64_t position) const;

  // Whether query position q may attend to key position k.
  bool allows(std::int64_t q, std::int64_t k) const;

 private:
  struct Run {
    std::int64_t start;
    TokenInfo info;
  };
  std::vector<Run> runs_;
  std::vector<std::int64_t> example_offsets_;
  std::int64_t total_ = 0;
};

class DenseMask {
 public:
  DenseMask() = default;
  DenseMask(std::int64_t n, std::vector<std::int64_t> example_offsets);

  std::int64_t size() const noexcept { return n_; }
  bool at(std::int64_t q, std::int64_t k) const { return bits_[static_cast<std::size_t>(q * n_ + k)] != 0; }
  void set(std::int64_t q, std::int64_t k, bool value) { bits_[static_cast<std::size_t>(q * n_ + k)] = value; }
  const std::vector<std::int64_t>& example_offsets() const noexcept { return offsets_; }

  friend bool operator==(const DenseMask&, const DenseMask&) = default;

 private:
  std::int64_t n_ = 0;
  std::vector<std::int64_t> offsets_;
  std::vector<std::uint8_t> bits_;
};

inline constexpr std::int64_t kDefaultMaskCap = 8192;

DenseMask build_mask(const PackedLayout& layout, std::int64_t cap = kDefaultMaskCap);

// Binary export, all integers little-endian:
//   "MMSK"  u32 version(=1)  u32 rows  u32 cols  u32 n_examples
//   u32 offsets[n_examples + 1]
//   ceil(rows * cols / 8) bytes of row-major bits, LSB first within a byte.
void write_mask(std::ostream& out, const DenseMask& mask);
DenseMask read_mask(std::istream& in);

}  // namespace mmforge
