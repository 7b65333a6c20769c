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

// HOTA by exhaustive enumeration of per-frame matchings. Alignment scores
// follow the soft potential-match counting; each frame keeps the matching
// with the most pairs, then the largest alignment sum, then the
// lexicographically smallest partner list (unmatched last).

#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "mmforge/metrics.hpp"
#include "mmforge/random.hpp"

namespace oracle {

struct HotaOracle {
  double hota = 0.0;
  double det_a = 0.0;
  double ass_a = 0.0;
};

inline HotaOracle brute_force_hota(const std::vector<mmforge::TrackFrame>& frames) {
  std::map<int, double> gt_count, pred_count;
  std::map<std::pair<int, int>, double> potential;
  for (const auto& f : frames) {
    for (int id : f.gt_ids) gt_count[id] += 1;
    for (int id : f.pred_ids) pred_count[id] += 1;
    for (std::size_t g = 0; g < f.gt_ids.size(); ++g) {
      for (std::size_t p = 0; p < f.pred_ids.size(); ++p) {
        if (!f.hit[g][p]) continue;
        int row = 0, col = 0;
        for (std::size_t q = 0; q < f.pred_ids.size(); ++q) row += f.hit[g][q];
        for (std::size_t h = 0; h < f.gt_ids.size(); ++h) col += f.hit[h][p];
        potential[{f.gt_ids[g], f.pred_ids[p]}] += 1.0 / (row + col - 1);
      }
    }
  }
  auto align = [&](int g, int p) {
    auto it = potential.find({g, p});
    if (it == potential.end()) return 0.0;
    return it->second / (gt_count[g] + pred_count[p] - it->second);
  };

  std::int64_t tp = 0, fp = 0, fn = 0;
  std::map<std::pair<int, int>, double> matched;
  for (const auto& f : frames) {
    const std::size_t G = f.gt_ids.size(), P = f.pred_ids.size();
    std::vector<int> partner(G, -1), best;
    std::vector<bool> used(P, false);
    int best_size = -1;
    double best_weight = 0.0;
    auto key = [&](const std::vector<int>& v) {
      std::vector<int> k;
      for (int x : v) k.push_back(x < 0 ? static_cast<int>(P) : x);
      return k;
    };
    std::function<void(std::size_t, int, double)> walk = [&](std::size_t g, int size, double weight) {
      if (g == G) {
        const bool better = size > best_size ||
                            (size == best_size && (weight > best_weight + 1e-9 ||
                                                   (std::abs(weight - best_weight) <= 1e-9 && key(partner) < key(best))));
        if (better) {
          best = partner;
          best_size = size;
          best_weight = weight;
        }
        return;
      }
      walk(g + 1, size, weight);
      for (std::size_t p = 0; p < P; ++p) {
        if (used[p] || !f.hit[g][p]) continue;
        used[p] = true;
        partner[g] = static_cast<int>(p);
        walk(g + 1, size + 1, weight + align(f.gt_ids[g], f.pred_ids[p]));
        partner[g] = -1;
        used[p] = false;
      }
    };
    walk(0, 0, 0.0);
    tp += best_size;
    fp += static_cast<std::int64_t>(P) - best_size;
    fn += static_cast<std::int64_t>(G) - best_size;
    for (std::size_t g = 0; g < G; ++g)
      if (best[g] >= 0) matched[{f.gt_ids[g], f.pred_ids[best[g]]}] += 1;
  }

  HotaOracle out;
  if (tp + fp + fn == 0) return {1.0, 1.0, 1.0};
  out.det_a = static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
  if (tp > 0) {
    double sum = 0.0;
    for (const auto& [pair, n] : matched) sum += n * n / (gt_count[pair.first] + pred_count[pair.second] - n);
    out.ass_a = sum / static_cast<double>(tp);
  }
  out.hota = std::sqrt(out.det_a * out.ass_a);
  return out;
}

inline std::vector<mmforge::TrackFrame> random_track_frames(mmforge::Rng& rng) {
  std::vector<mmforge::TrackFrame> frames;
  const int count = 1 + static_cast<int>(rng.below(4));
  for (int t = 0; t < count; ++t) {
    mmforge::TrackFrame f;
    f.tick = t;
    for (int id = 1; id <= 3; ++id) {
      if (rng.below(4) != 0) f.gt_ids.push_back(id);
      if (rng.below(4) != 0) f.pred_ids.push_back(10 + id);
    }
    f.hit.assign(f.gt_ids.size(), std::vector<bool>(f.pred_ids.size(), false));
    for (auto& row : f.hit)
      for (std::size_t p = 0; p < row.size(); ++p) row[p] = rng.below(2) == 0;
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace oracle
