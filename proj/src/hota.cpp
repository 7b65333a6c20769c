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

#include <cmath>
#include <map>
#include <utility>

#include "mmforge/matching.hpp"
#include "mmforge/metrics.hpp"

namespace mmforge {

HotaScore hota(std::span<const TrackFrame> frames) {
  using Pair = std::pair<int, int>;  // (gt id, pred id)
  std::map<int, double> gt_count, pred_count;
  std::map<Pair, double> potential;

  // Global alignment between ids: soft match counts where each frame's
  // similarity is normalized by the competing hits in its row and column.
  for (const auto& f : frames) {
    for (int id : f.gt_ids) gt_count[id] += 1.0;
    for (int id : f.pred_ids) pred_count[id] += 1.0;
    std::vector<int> row_hits(f.gt_ids.size(), 0), col_hits(f.pred_ids.size(), 0);
    for (std::size_t g = 0; g < f.gt_ids.size(); ++g)
      for (std::size_t p = 0; p < f.pred_ids.size(); ++p)
        if (f.hit[g][p]) {
          ++row_hits[g];
          ++col_hits[p];
        }
    for (std::size_t g = 0; g < f.gt_ids.size(); ++g)
      for (std::size_t p = 0; p < f.pred_ids.size(); ++p)
        if (f.hit[g][p]) potential[{f.gt_ids[g], f.pred_ids[p]}] += 1.0 / (row_hits[g] + col_hits[p] - 1);
  }
  std::map<Pair, double> alignment;
  for (const auto& [pair, pm] : potential)
    alignment[pair] = pm / (gt_count[pair.first] + pred_count[pair.second] - pm);

  HotaScore out;
  std::map<Pair, double> matches;
  for (const auto& f : frames) {
    std::vector<std::vector<bool>> allowed(f.gt_ids.size(), std::vector<bool>(f.pred_ids.size(), false));
    std::vector<std::vector<double>> weight(f.gt_ids.size(), std::vector<double>(f.pred_ids.size(), 0.0));
    for (std::size_t g = 0; g < f.gt_ids.size(); ++g)
      for (std::size_t p = 0; p < f.pred_ids.size(); ++p)
        if (f.hit[g][p]) {
          allowed[g][p] = true;
          weight[g][p] = alignment[{f.gt_ids[g], f.pred_ids[p]}];
        }
    auto match = canonical_max_matching(allowed, weight, static_cast<int>(f.pred_ids.size()));
    std::int64_t tp = 0;
    for (std::size_t g = 0; g < match.size(); ++g) {
      if (match[g] == kUnmatched) continue;
      ++tp;
      matches[{f.gt_ids[g], f.pred_ids[match[g]]}] += 1.0;
    }
    out.counts += {tp, static_cast<std::int64_t>(f.pred_ids.size()) - tp, static_cast<std::int64_t>(f.gt_ids.size()) - tp};
  }

  const auto& c = out.counts;
  if (c.tp == 0 && c.fp == 0 && c.fn == 0) return {1.0, 1.0, 1.0, c};
  out.det_a = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp + c.fn);
  if (c.tp > 0) {
    // Each true positive scores its pair's TPA / (TPA + FNA + FPA).
    double total = 0.0;
    for (const auto& [pair, n] : matches)
      total += n * n / (gt_count[pair.first] + pred_count[pair.second] - n);
    out.ass_a = total / static_cast<double>(c.tp);
  }
  out.hota = std::sqrt(out.det_a * out.ass_a);
  return out;
}

}  // namespace mmforge
