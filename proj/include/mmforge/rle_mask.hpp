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

#include <cstdint>
#include <span>
#include <vector>

namespace mmforge {

// Binary mask stored as run lengths in column-major scan order: down column
// 0 from the top, then column 1, and so on. The first run counts background
// pixels and may be zero; runs then alternate foreground/background.
class RleMask {
 public:
  RleMask() = default;
  // Throws InvalidMask unless the runs sum to height * width.
  RleMask(int height, int width, std::vector<std::int64_t> runs);

  // Row-major dense input, pixels[y * width + x].
  static RleMask from_dense(int height, int width, std::span<const std::uint8_t> pixels);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  const std::vector<std::int64_t>& runs() const noexcept { return runs_; }

  bool contains(int x, int y) const;
  // Real-valued pixel coordinates; the pixel is floor(px), floor(py), with
  // the far image edge mapped onto the last pixel.
  bool contains_point(double px, double py) const;

  std::int64_t area() const;
  bool empty() const { return area() == 0; }

  // Row-major dense copy.
  std::vector<std::uint8_t> to_dense() const;

  friend bool operator==(const RleMask& a, const RleMask& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.runs_ == b.runs_;
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::int64_t> runs_;
  std::vector<std::int64_t> ends_;  // exclusive prefix sums of runs_
};

}  // namespace mmforge
