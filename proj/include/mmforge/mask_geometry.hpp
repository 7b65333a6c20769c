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

#include <cmath>
#include <cstdint>
#include <vector>

#include "mmforge/rle_mask.hpp"

namespace mmforge {

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// Dense view of a non-empty mask with its centroid and, for every mask
// pixel, the Euclidean distance to the nearest border pixel (a mask pixel
// with a 4-neighbour outside the mask or the image).
class MaskGeometry {
 public:
  explicit MaskGeometry(const RleMask& mask);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool inside(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_ && dense_[index(x, y)] != 0;
  }
  double centroid_x() const noexcept { return cx_; }
  double centroid_y() const noexcept { return cy_; }
  double boundary_distance(int x, int y) const { return std::sqrt(static_cast<double>(boundary_sq_[index(x, y)])); }
  std::int64_t area() const noexcept { return area_; }
  int min_x() const noexcept { return min_x_; }
  int max_x() const noexcept { return max_x_; }
  int min_y() const noexcept { return min_y_; }
  int max_y() const noexcept { return max_y_; }

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> dense_;
  std::vector<std::int64_t> boundary_sq_;
  double cx_ = 0.0;
  double cy_ = 0.0;
  std::int64_t area_ = 0;
  int min_x_ = 0, max_x_ = 0, min_y_ = 0, max_y_ = 0;
};

// Mask pixel maximizing
//   alpha * (1 - d_centroid / D) + (1 - alpha) * d_boundary / B
// with D, B the in-mask maxima (a term is 1 when its maximum is 0). Ties go
// to the first pixel in row-major scan order.
Pixel extract_track_point(const MaskGeometry& mask, double alpha = 0.5);

// Rejection-samples N(centroid, (sigma_frac * bbox diagonal)^2 I) until the
// rounded pixel lands in the mask; falls back to extract_track_point.
Pixel sample_gaussian_point(const MaskGeometry& mask, std::uint64_t seed, double sigma_frac = 1.0 / 6.0,
                            int max_tries = 1000);

}  // namespace mmforge
