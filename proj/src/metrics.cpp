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

#include "mmforge/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>

#include "mmforge/error.hpp"
#include "mmforge/matching.hpp"

namespace mmforge {

namespace {

constexpr double kGridEps = 1e-6;

std::optional<std::int64_t> grid_tick(double t, double fps) {
  const double scaled = t * fps;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > kGridEps) return std::nullopt;
  return static_cast<std::int64_t>(rounded);
}

// Height and width shared by every ground-truth mask; {0, 0} when none.
std::pair<int, int> mask_size(std::span<const GtTrack> gts) {
  std::optional<std::pair<int, int>> size;
  for (const auto& g : gts) {
    for (const auto& f : g.frames) {
      std::pair<int, int> s{f.mask.height(), f.mask.width()};
      if (!size)
        size = s;
      else if (*size != s)
        fail(ErrorCode::MaskDimMismatch, "ground-truth masks differ in size");
    }
  }
  return size.value_or(std::pair<int, int>{0, 0});
}

bool mask_hit(const RleMask& mask, const GroundedPoint& p) {
  PixelPoint px = denormalize_point(p.x, p.y, mask.width(), mask.height());
  return mask.contains_point(px.x, px.y);
}

double ratio(std::int64_t num, std::int64_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

std::string normalize_statement(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      if (space && !out.empty()) out += ' ';
      out += static_cast<char>(std::tolower(u));
      space = false;
    } else {
      space = true;
    }
  }
  return out;
}

}  // namespace

std::int64_t close_tolerance(std::int64_t gt) {
  if (gt < 0) fail(ErrorCode::InvalidArgument, "ground-truth count must be non-negative");
  // floor(0.05 * gt) == gt / 20 for non-negative integers
  return 1 + gt / 20;
}

bool close_accuracy(std::int64_t pred, std::int64_t gt) {
  const std::int64_t delta = close_tolerance(gt);
  return pred >= gt - delta && pred <= gt + delta;
}

bool exact_accuracy(std::int64_t pred, std::int64_t gt) { return pred == gt; }

Prf prf_from_counts(const DetectionCounts& c) {
  if (c.tp == 0 && c.fp == 0 && c.fn == 0) return {1.0, 1.0, 1.0};
  Prf out;
  out.precision = ratio(c.tp, c.tp + c.fp);
  out.recall = ratio(c.tp, c.tp + c.fn);
  const double denom = out.precision + out.recall;
  out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

Prf macro_average(std::span<const Prf> per_example) {
  Prf out;
  if (per_example.empty()) return out;
  for (const auto& p : per_example) {
    out.precision += p.precision;
    out.recall += p.recall;
    out.f1 += p.f1;
  }
  const auto n = static_cast<double>(per_example.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

PointScore point_f1(const GroundingBlock& pred, std::span<const GtTrack> gts, double window_s) {
  if (pred.kind != BlockKind::Points) fail(ErrorCode::KindMismatch, "point F1 expects a <points> answer");
  if (!is_video(pred)) fail(ErrorCode::KindMismatch, "point F1 expects timestamped points");
  mask_size(gts);

  std::vector<std::pair<double, GroundedPoint>> points;
  for (const auto& frame : pred.frames)
    for (const auto& p : frame.points) points.emplace_back(frame.locus.seconds(), p);

  std::vector<std::vector<int>> adjacency(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [t, p] = points[i];
    for (std::size_t g = 0; g < gts.size(); ++g) {
      bool hit = std::any_of(gts[g].frames.begin(), gts[g].frames.end(), [&](const GtFrame& f) {
        return std::abs(f.t - t) <= window_s + 1e-9 && mask_hit(f.mask, p);
      });
      if (hit) adjacency[i].push_back(static_cast<int>(g));
    }
  }
  std::vector<int> match = max_bipartite_matching(static_cast<int>(gts.size()), adjacency);
  PointScore out;
  out.counts.tp = std::count_if(match.begin(), match.end(), [](int m) { return m != kUnmatched; });
  out.counts.fp = static_cast<std::int64_t>(points.size()) - out.counts.tp;
  out.counts.fn = static_cast<std::int64_t>(gts.size()) - out.counts.tp;
  out.prf = prf_from_counts(out.counts);
  return out;
}

std::vector<TrackFrame> track_frames(const GroundingBlock& pred, std::span<const GtTrack> gts, double eval_fps) {
  if (pred.kind != BlockKind::Tracks) fail(ErrorCode::KindMismatch, "tracking metrics expect a <tracks> answer");
  if (!is_video(pred)) fail(ErrorCode::KindMismatch, "tracking metrics expect timestamped points");
  if (!(eval_fps > 0.0)) fail(ErrorCode::InvalidArgument, "evaluation fps must be positive");
  mask_size(gts);

  struct Slot {
    std::vector<std::pair<int, const RleMask*>> gts;
    std::vector<GroundedPoint> preds;
  };
  std::map<std::int64_t, Slot> slots;
  for (const auto& g : gts) {
    for (const auto& f : g.frames) {
      auto tick = grid_tick(f.t, eval_fps);
      if (!tick || f.mask.empty()) continue;
      auto& entries = slots[*tick].gts;
      if (std::none_of(entries.begin(), entries.end(), [&](const auto& e) { return e.first == g.object_id; }))
        entries.emplace_back(g.object_id, &f.mask);
    }
  }
  for (const auto& frame : pred.frames) {
    auto tick = grid_tick(frame.locus.seconds(), eval_fps);
    if (!tick) continue;
    auto& dst = slots[*tick].preds;
    dst.insert(dst.end(), frame.points.begin(), frame.points.end());
  }

  std::vector<TrackFrame> out;
  out.reserve(slots.size());
  for (auto& [tick, slot] : slots) {
    std::sort(slot.gts.begin(), slot.gts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::sort(slot.preds.begin(), slot.preds.end(),
              [](const auto& a, const auto& b) { return a.object_id < b.object_id; });
    TrackFrame f;
    f.tick = tick;
    for (const auto& [id, mask] : slot.gts) f.gt_ids.push_back(id);
    for (const auto& p : slot.preds) f.pred_ids.push_back(p.object_id);
    f.hit.assign(slot.gts.size(), std::vector<bool>(slot.preds.size(), false));
    for (std::size_t g = 0; g < slot.gts.size(); ++g)
      for (std::size_t p = 0; p < slot.preds.size(); ++p) f.hit[g][p] = mask_hit(*slot.gts[g].second, slot.preds[p]);
    out.push_back(std::move(f));
  }
  return out;
}

PointScore track_f1(std::span<const TrackFrame> frames) {
  PointScore out;
  for (const auto& f : frames) {
    std::vector<std::vector<int>> adjacency(f.gt_ids.size());
    for (std::size_t g = 0; g < f.gt_ids.size(); ++g)
      for (std::size_t p = 0; p < f.pred_ids.size(); ++p)
        if (f.hit[g][p]) adjacency[g].push_back(static_cast<int>(p));
    auto match = max_bipartite_matching(static_cast<int>(f.pred_ids.size()), adjacency);
    const auto tp = std::count_if(match.begin(), match.end(), [](int m) { return m != kUnmatched; });
    out.counts += {tp, static_cast<std::int64_t>(f.pred_ids.size()) - tp, static_cast<std::int64_t>(f.gt_ids.size()) - tp};
  }
  out.prf = prf_from_counts(out.counts);
  return out;
}

PointScore track_f1(const GroundingBlock& pred, std::span<const GtTrack> gts, double eval_fps) {
  return track_f1(track_frames(pred, gts, eval_fps));
}

HotaScore hota(const GroundingBlock& pred, std::span<const GtTrack> gts, double eval_fps) {
  return hota(track_frames(pred, gts, eval_fps));
}

bool ExactMatchJudge::supported(std::string_view statement, std::span<const std::string> reference) const {
  const std::string key = normalize_statement(statement);
  return std::any_of(reference.begin(), reference.end(),
                     [&](const std::string& r) { return normalize_statement(r) == key; });
}

JudgeVerdicts judge_statements(std::span<const std::string> model_statements,
                               std::span<const std::string> human_statements, const StatementJudge& judge) {
  JudgeVerdicts v;
  for (const auto& s : model_statements) v.model_supported.push_back(judge.supported(s, human_statements));
  for (const auto& s : human_statements) v.human_supported.push_back(judge.supported(s, model_statements));
  return v;
}

Prf caption_video_scores(const CaptionItem& video) {
  if (video.verdicts.model_supported.size() != video.model_statements ||
      video.verdicts.human_supported.size() != video.human_statements)
    fail(ErrorCode::ArityMismatch, "verdict count does not match statement count");
  auto share = [](const std::vector<bool>& flags, std::size_t n, std::size_t other) {
    if (n == 0) return other == 0 ? 1.0 : 0.0;
    return static_cast<double>(std::count(flags.begin(), flags.end(), true)) / static_cast<double>(n);
  };
  Prf out;
  out.precision = share(video.verdicts.model_supported, video.model_statements, video.human_statements);
  out.recall = share(video.verdicts.human_supported, video.human_statements, video.model_statements);
  const double denom = out.precision + out.recall;
  out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

Prf caption_f1(std::span<const CaptionItem> videos) {
  Prf out;
  if (videos.empty()) return out;
  for (const auto& v : videos) {
    Prf s = caption_video_scores(v);
    out.precision += s.precision;
    out.recall += s.recall;
  }
  out.precision /= static_cast<double>(videos.size());
  out.recall /= static_cast<double>(videos.size());
  const double denom = out.precision + out.recall;
  out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

}  // namespace mmforge
