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

// Compact point/track answer format:
//
//   <points coords="1 1 555 169;2 3 649 154 4 709 162">inline text</points>
//   <tracks coords="0.0 1 635 522;0.5 1 606 490 2 511 124">inline text</tracks>
//
// Frames are separated by ';'. Each frame starts with a locus (an image
// index starting at 1, or a video timestamp in seconds with exactly one
// decimal digit) followed by one or more "object_id x y" triples with x, y
// normalized to [0, 1000].

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmforge {

enum class BlockKind { Points, Tracks };

std::string_view to_string(BlockKind kind) noexcept;

class Locus {
 public:
  enum class Kind { ImageIndex, Timestamp };

  // Image index, 1-based.
  static Locus image(std::int64_t index);
  // Timestamp expressed in tenths of a second.
  static Locus tenths(std::int64_t deciseconds);

  Kind kind() const noexcept { return kind_; }
  std::int64_t value() const noexcept { return value_; }
  bool is_timestamp() const noexcept { return kind_ == Kind::Timestamp; }
  double seconds() const noexcept { return static_cast<double>(value_) / 10.0; }

  // "3" for image 3, "12.5" for 125 tenths.
  std::string to_string() const;

  friend auto operator<=>(const Locus&, const Locus&) = default;

 private:
  Locus(Kind kind, std::int64_t value) : kind_(kind), value_(value) {}

  Kind kind_ = Kind::ImageIndex;
  std::int64_t value_ = 1;
};

inline constexpr int kCoordMax = 1000;

struct GroundedPoint {
  int object_id = 1;
  int x = 0;
  int y = 0;

  friend bool operator==(const GroundedPoint&, const GroundedPoint&) = default;
};

struct GroundedFrame {
  Locus locus = Locus::image(1);
  std::vector<GroundedPoint> points;

  friend bool operator==(const GroundedFrame&, const GroundedFrame&) = default;
};

struct GroundingBlock {
  BlockKind kind = BlockKind::Points;
  std::vector<GroundedFrame> frames;
  std::string inline_text;

  friend bool operator==(const GroundingBlock&, const GroundingBlock&) = default;
};

// Strict parse. Points inside a frame are reordered into canonical order,
// (x, y) for points and object id for tracks; every other invariant
// violation throws.
GroundingBlock parse_grounding(std::string_view text,
                               std::optional<BlockKind> kind_hint = std::nullopt);

struct LenientParse {
  GroundingBlock block;
  int violations = 0;
  std::vector<std::string> notes;
};

// Recovering parse for scoring generated text: clamps coordinates, drops
// duplicate ids, merges out-of-order frames and incomplete triples. Each
// repair is counted. Only an unrecoverable element structure throws.
LenientParse parse_grounding_lenient(std::string_view text,
                                     std::optional<BlockKind> kind_hint = std::nullopt);

// Throws InvariantViolation describing the first broken invariant.
void validate(const GroundingBlock& block);

std::string serialize_coords(const GroundingBlock& block);
std::string serialize(const GroundingBlock& block);

// Highest object id in the block; 0 when empty.
int count(const GroundingBlock& block);

std::size_t point_count(const GroundingBlock& block);

// True when the block has no frames or all loci are timestamps.
bool is_video(const GroundingBlock& block) noexcept;

struct NormalizedPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const NormalizedPoint&, const NormalizedPoint&) = default;
};

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

NormalizedPoint normalize_point(double px, double py, double width, double height);
PixelPoint denormalize_point(int x, int y, double width, double height);

struct FrameAlignment {
  double grid_fps = 1.0;
  // Grid tick index (timestamp = tick / grid_fps) to the points snapped there.
  std::map<std::int64_t, std::vector<GroundedPoint>> slots;
  std::vector<Locus> unaligned;

  double slot_seconds(std::int64_t tick) const { return static_cast<double>(tick) / grid_fps; }
};

FrameAlignment align_to_frames(const GroundingBlock& block, double grid_fps, double tolerance_s);

}  // namespace mmforge
