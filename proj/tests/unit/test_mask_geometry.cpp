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

#include <cmath>
#include <limits>
#include <vector>

#include "../oracles/geometry_oracle.hpp"
#include "mmforge/error.hpp"
#include "mmforge/mask_geometry.hpp"
#include "mmforge/random.hpp"
#include "mmforge/rle_mask.hpp"

using namespace mmforge;

using oracle::Dense;
using oracle::brute_boundary_sq;
using oracle::brute_extract;
using oracle::disk;

TEST_CASE("track point of a disk is its centre") {
  const auto d = disk(41, 41, 20, 20, 10);
  const MaskGeometry g(d.rle());
  CHECK(g.centroid_x() == doctest::Approx(20.0));
  CHECK(extract_track_point(g) == Pixel{20, 20});
  // The nearest border pixel is (29, 21): inside, with (30, 21) outside.
  CHECK(g.boundary_distance(20, 20) == doctest::Approx(std::sqrt(82.0)));
}

TEST_CASE("track point of a thin line is its middle") {
  Dense d{1, 9, std::vector<std::uint8_t>(9, 1)};
  CHECK(extract_track_point(MaskGeometry(d.rle())) == Pixel{4, 0});
}

TEST_CASE("track point of a C shape stays on the mask") {
  // Ring with its right side cut away: the centroid lies in the hole.
  auto d = disk(60, 60, 30, 30, 25);
  for (int y = 0; y < 60; ++y)
    for (int x = 0; x < 60; ++x) {
      const double r2 = (x - 30.0) * (x - 30.0) + (y - 30.0) * (y - 30.0);
      if (r2 < 15.0 * 15.0 || (x > 35 && std::abs(y - 30) < 10)) d.px[static_cast<std::size_t>(y) * 60 + x] = 0;
    }
  const MaskGeometry g(d.rle());
  CHECK_FALSE(g.inside(static_cast<int>(std::lround(g.centroid_x())), static_cast<int>(std::lround(g.centroid_y()))));
  const Pixel p = extract_track_point(g);
  CHECK(d.in(p.x, p.y));
  CHECK(g.boundary_distance(p.x, p.y) > 0.0);
}

TEST_CASE("geometry matches dense brute force") {
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const int h = 1 + static_cast<int>(rng.below(14)), w = 1 + static_cast<int>(rng.below(14));
    Dense d{h, w, std::vector<std::uint8_t>(static_cast<std::size_t>(h) * w, 0)};
    const double density = 0.3 + 0.6 * rng.uniform();
    for (auto& p : d.px) p = rng.uniform() < density;
    d.px[rng.below(d.px.size())] = 1;
    const MaskGeometry g(d.rle());
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        CHECK(g.inside(x, y) == d.in(x, y));
        if (d.in(x, y)) CHECK(g.boundary_distance(x, y) == std::sqrt(static_cast<double>(brute_boundary_sq(d, x, y))));
      }
    const double alpha = trial % 3 == 0 ? 0.5 : rng.uniform();
    const Pixel p = extract_track_point(g, alpha);
    CHECK(d.in(p.x, p.y));
    CHECK(p == brute_extract(d, alpha));
  }
}

TEST_CASE("gaussian point sampling") {
  Dense one{5, 5, std::vector<std::uint8_t>(25, 0)};
  one.px[2 * 5 + 3] = 1;
  const MaskGeometry single(one.rle());
  for (std::uint64_t s = 0; s < 20; ++s) CHECK(sample_gaussian_point(single, s) == Pixel{3, 2});

  const auto d = disk(101, 101, 50, 50, 30);
  const MaskGeometry g(d.rle());
  const int n = 4000;
  double mx = 0, my = 0, vx = 0;
  for (int s = 0; s < n; ++s) {
    const Pixel p = sample_gaussian_point(g, static_cast<std::uint64_t>(s));
    CHECK(d.in(p.x, p.y));
    mx += p.x;
    my += p.y;
    vx += (p.x - 50.0) * (p.x - 50.0);
  }
  mx /= n;
  my /= n;
  const double se = std::sqrt(vx / n / n);
  CHECK(std::abs(mx - 50.0) < 3 * se);
  CHECK(std::abs(my - 50.0) < 3 * se + 0.5);
  CHECK(sample_gaussian_point(g, 9) == sample_gaussian_point(g, 9));

  Dense ring = disk(61, 61, 30, 30, 28);
  for (int y = 0; y < 61; ++y)
    for (int x = 0; x < 61; ++x)
      if ((x - 30.0) * (x - 30.0) + (y - 30.0) * (y - 30.0) < 20.0 * 20.0) ring.px[static_cast<std::size_t>(y) * 61 + x] = 0;
  const MaskGeometry rg(ring.rle());
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Pixel p = sample_gaussian_point(rg, s);
    CHECK(ring.in(p.x, p.y));
  }
}

TEST_CASE("empty masks are rejected") {
  const std::vector<std::uint8_t> zeros(16, 0);
  try {
    MaskGeometry g(RleMask::from_dense(4, 4, zeros));
    FAIL("expected EmptyMask");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyMask);
  }
}
