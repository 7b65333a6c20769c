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

// Synthetic battles from known strengths and rank correlation.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mmforge/elo.hpp"
#include "mmforge/random.hpp"

namespace oracle {

inline std::vector<mmforge::Battle> sample_battles(const std::vector<double>& strength, int per_pair, std::uint64_t seed,
                                                   double tie_rate = 0.0) {
  mmforge::Rng rng(seed);
  std::vector<mmforge::Battle> out;
  for (std::size_t i = 0; i < strength.size(); ++i)
    for (std::size_t j = i + 1; j < strength.size(); ++j)
      for (int k = 0; k < per_pair; ++k) {
        mmforge::Battle b{"m" + std::to_string(i), "m" + std::to_string(j), mmforge::Outcome::Tie};
        if (rng.uniform() >= tie_rate)
          b.outcome = rng.uniform() < strength[i] / (strength[i] + strength[j]) ? mmforge::Outcome::AWins
                                                                                 : mmforge::Outcome::BWins;
        out.push_back(std::move(b));
      }
  return out;
}

// Average ranks, ties sharing the mean rank.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = (static_cast<double>(i + j) / 2.0) + 1.0;
    i = j + 1;
  }
  return r;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n, mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

}  // namespace oracle
