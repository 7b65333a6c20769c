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

// Small fixtures shared by metric tests and the acceptance suite.

#include <string>
#include <vector>

#include "mmforge/grounding.hpp"
#include "mmforge/metrics.hpp"

namespace fixture {

// Axis-aligned rectangle [x0, x1) x [y0, y1) on an h x w image.
inline mmforge::RleMask rect(int h, int w, int x0, int y0, int x1, int y1) {
  std::vector<std::uint8_t> dense(static_cast<std::size_t>(h) * w, 0);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) dense[static_cast<std::size_t>(y) * w + x] = 1;
  return mmforge::RleMask::from_dense(h, w, dense);
}

// Two objects on a 100 x 100 frame: object 1 fills the left half, object 2
// the right half, both present at t = 0, 1, 2, 3.
inline std::vector<mmforge::GtTrack> two_halves() {
  std::vector<mmforge::GtTrack> gts(2);
  for (int id = 1; id <= 2; ++id) {
    gts[id - 1].object_id = id;
    for (int t = 0; t < 4; ++t)
      gts[id - 1].frames.push_back({static_cast<double>(t), id == 1 ? rect(100, 100, 0, 0, 50, 100) : rect(100, 100, 50, 0, 100, 100)});
  }
  return gts;
}

// Predicted ids 1 and 2 follow objects 1 and 2, then exchange objects for
// the last two frames.
inline constexpr const char* kIdSwap =
    "<tracks coords=\"0.0 1 250 500 2 750 500;1.0 1 250 500 2 750 500;"
    "2.0 2 250 500 1 750 500;3.0 2 250 500 1 750 500\">swap</tracks>";

inline constexpr const char* kPerfect =
    "<tracks coords=\"0.0 1 250 500 2 750 500;1.0 1 250 500 2 750 500;"
    "2.0 1 250 500 2 750 500;3.0 1 250 500 2 750 500\">ok</tracks>";

}  // namespace fixture
