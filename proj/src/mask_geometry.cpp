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

#include "mmforge/mask_geometry.hpp"

#include <algorithm>
#include <limits>

#include "mmforge/error.hpp"
#include "mmforge/random.hpp"

namespace mmforge {

namespace {

constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max() / 4;

// One-dimensional squared distance transform (lower envelope of parabolas).
void distance_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d) {
  const int n = static_cast<int>(f.size());
  std::vector<int> v(n, 0);
  std::vector<double> z(n + 1, 0.0);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] >= kFar) continue;
    while (k >= 0) {
      const double s = (static_cast<double>(f[q] + static_cast<std::int64_t>(q) * q) -
                        static_cast<double>(f[v[k]] + static_cast<std::int64_t>(v[k]) * v[k])) /
                       (2.0 * (q - v[k]));
      if (s <= z[k]) {
        --k;
        continue;
      }
      ++k;
      v[k] = q;
      z[k] = s;
      z[k + 1] = std::numeric_limits<double>::infinity();
      break;
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
      z[1] = std::numeric_limits<double>::infinity();
    }
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kFar);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const std::int64_t dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

MaskGeometry::MaskGeometry(const RleMask& mask)
    : width_(mask.width()), height_(mask.height()), dense_(mask.to_dense()) {
  if (mask.empty()) fail(ErrorCode::EmptyMask, "mask has no foreground pixels");
  std::int64_t sx = 0, sy = 0;
  min_x_ = width_;
  min_y_ = height_;
  max_x_ = -1;
  max_y_ = -1;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (!dense_[index(x, y)]) continue;
      ++area_;
      sx += x;
      sy += y;
      min_x_ = std::min(min_x_, x);
      max_x_ = std::max(max_x_, x);
      min_y_ = std::min(min_y_, y);
      max_y_ = std::max(max_y_, y);
    }
  }
  cx_ = static_cast<double>(sx) / static_cast<double>(area_);
  cy_ = static_cast<double>(sy) / static_cast<double>(area_);

  // Squared EDT to the border pixels: columns, then rows.
  std::vector<std::int64_t> grid(dense_.size(), kFar);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (!inside(x, y)) continue;
      if (!inside(x - 1, y) || !inside(x + 1, y) || !inside(x, y - 1) || !inside(x, y + 1)) grid[index(x, y)] = 0;
    }
  }
  std::vector<std::int64_t> f(static_cast<std::size_t>(height_)), d(static_cast<std::size_t>(height_));
  for (int x = 0; x < width_; ++x) {
    for (int y = 0; y < height_; ++y) f[y] = grid[index(x, y)];
    distance_1d(f, d);
    for (int y = 0; y < height_; ++y) grid[index(x, y)] = d[y];
  }
  f.resize(static_cast<std::size_t>(width_));
  d.resize(static_cast<std::size_t>(width_));
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) f[x] = grid[index(x, y)];
    distance_1d(f, d);
    for (int x = 0; x < width_; ++x) grid[index(x, y)] = d[x];
  }
  boundary_sq_ = std::move(grid);
}

Pixel extract_track_point(const MaskGeometry& mask, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::OutOfUnitInterval, "alpha must lie in [0, 1]");
  auto centroid_distance = [&](int x, int y) {
    const double dx = x - mask.centroid_x(), dy = y - mask.centroid_y();
    return std::sqrt(dx * dx + dy * dy);
  };
  double max_centroid = 0.0, max_boundary = 0.0;
  for (int y = mask.min_y(); y <= mask.max_y(); ++y) {
    for (int x = mask.min_x(); x <= mask.max_x(); ++x) {
      if (!mask.inside(x, y)) continue;
      max_centroid = std::max(max_centroid, centroid_distance(x, y));
      max_boundary = std::max(max_boundary, mask.boundary_distance(x, y));
    }
  }
  Pixel best{};
  double best_score = -std::numeric_limits<double>::infinity();
  for (int y = mask.min_y(); y <= mask.max_y(); ++y) {
    for (int x = mask.min_x(); x <= mask.max_x(); ++x) {
      if (!mask.inside(x, y)) continue;
      const double central = max_centroid > 0.0 ? 1.0 - centroid_distance(x, y) / max_centroid : 1.0;
      const double interior = max_boundary > 0.0 ? mask.boundary_distance(x, y) / max_boundary : 1.0;
      const double score = alpha * central + (1.0 - alpha) * interior;
      if (score > best_score) {
        best_score = score;
        best = {x, y};
      }
    }
  }
  return best;
}

Pixel sample_gaussian_point(const MaskGeometry& mask, std::uint64_t seed, double sigma_frac, int max_tries) {
  if (!(sigma_frac > 0.0)) fail(ErrorCode::InvalidArgument, "sigma fraction must be positive");
  const double bw = mask.max_x() - mask.min_x() + 1;
  const double bh = mask.max_y() - mask.min_y() + 1;
  const double sigma = sigma_frac * std::sqrt(bw * bw + bh * bh);
  Rng rng(seed);
  for (int i = 0; i < max_tries; ++i) {
    const double sx = mask.centroid_x() + sigma * rng.normal();
    const double sy = mask.centroid_y() + sigma * rng.normal();
    const double px = std::floor(sx + 0.5), py = std::floor(sy + 0.5);
    if (px < 0 || py < 0 || px >= mask.width() || py >= mask.height()) continue;
    if (mask.inside(static_cast<int>(px), static_cast<int>(py))) return {static_cast<int>(px), static_cast<int>(py)};
  }
  return extract_track_point(mask);
}

}  // namespace mmforge
