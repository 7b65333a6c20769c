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

#include "mmforge/rle_mask.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmforge/error.hpp"

namespace mmforge {

RleMask::RleMask(int height, int width, std::vector<std::int64_t> runs)
    : height_(height), width_(width), runs_(std::move(runs)) {
  if (height <= 0 || width <= 0) fail(ErrorCode::InvalidMask, "mask dimensions must be positive");
  std::int64_t total = 0;
  ends_.reserve(runs_.size());
  for (auto r : runs_) {
    if (r < 0) fail(ErrorCode::InvalidMask, "run lengths must be non-negative");
    total += r;
    ends_.push_back(total);
  }
  const std::int64_t expected = static_cast<std::int64_t>(height) * width;
  if (total != expected)
    fail(ErrorCode::InvalidMask, "runs sum to " + std::to_string(total) + ", expected " + std::to_string(expected));
}

RleMask RleMask::from_dense(int height, int width, std::span<const std::uint8_t> pixels) {
  if (pixels.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
    fail(ErrorCode::InvalidMask, "dense mask size does not match dimensions");
  std::vector<std::int64_t> runs;
  bool current = false;
  std::int64_t length = 0;
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) {
      bool v = pixels[static_cast<std::size_t>(y) * width + x] != 0;
      if (v != current) {
        runs.push_back(length);
        current = v;
        length = 0;
      }
      ++length;
    }
  }
  runs.push_back(length);
  return RleMask(height, width, std::move(runs));
}

bool RleMask::contains(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
  const std::int64_t index = static_cast<std::int64_t>(x) * height_ + y;
  auto it = std::upper_bound(ends_.begin(), ends_.end(), index);
  // Zero-length runs share an end with their predecessor; upper_bound skips them.
  return (it - ends_.begin()) % 2 == 1;
}

bool RleMask::contains_point(double px, double py) const {
  if (!(px >= 0.0 && py >= 0.0 && px <= width_ && py <= height_)) return false;
  int x = std::min(static_cast<int>(std::floor(px)), width_ - 1);
  int y = std::min(static_cast<int>(std::floor(py)), height_ - 1);
  return contains(x, y);
}

std::int64_t RleMask::area() const {
  std::int64_t a = 0;
  for (std::size_t i = 1; i < runs_.size(); i += 2) a += runs_[i];
  return a;
}

std::vector<std::uint8_t> RleMask::to_dense() const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(height_) * width_, 0);
  std::int64_t index = 0;
  for (std::size_t r = 0; r < runs_.size(); ++r) {
    if (r % 2 == 1) {
      for (std::int64_t i = index; i < index + runs_[r]; ++i) {
        const std::int64_t x = i / height_, y = i % height_;
        out[static_cast<std::size_t>(y * width_ + x)] = 1;
      }
    }
    index += runs_[r];
  }
  return out;
}

}  // namespace mmforge
