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

// Counting, pointing, tracking and captioning metrics.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmforge/grounding.hpp"
#include "mmforge/rle_mask.hpp"

namespace mmforge {

// |pred - gt| <= 1 + floor(0.05 * gt)
bool close_accuracy(std::int64_t pred, std::int64_t gt);
std::int64_t close_tolerance(std::int64_t gt);
bool exact_accuracy(std::int64_t pred, std::int64_t gt);

struct GtFrame {
  double t = 0.0;  // seconds
  RleMask mask;
};

struct GtTrack {
  int object_id = 0;
  std::vector<GtFrame> frames;
};

struct DetectionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  DetectionCounts& operator+=(const DetectionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 0/0 is 0, except that an empty prediction against an empty ground truth
// scores 1 everywhere.
Prf prf_from_counts(const DetectionCounts& counts);
Prf macro_average(std::span<const Prf> per_example);

struct PointScore {
  DetectionCounts counts;
  Prf prf;
};

// Every predicted point may match one ground-truth object whose mask
// contains it in some annotated frame within +-window_s of the point.
PointScore point_f1(const GroundingBlock& pred, std::span<const GtTrack> gts, double window_s = 1.5);

// Per-frame evidence on the evaluation grid: which objects are present,
// which predicted ids have a point, and which points fall in which masks.
struct TrackFrame {
  std::int64_t tick = 0;  // timestamp = tick / fps
  std::vector<int> gt_ids;
  std::vector<int> pred_ids;
  std::vector<std::vector<bool>> hit;  // [gt][pred]
};

std::vector<TrackFrame> track_frames(const GroundingBlock& pred, std::span<const GtTrack> gts, double eval_fps = 1.0);

PointScore track_f1(std::span<const TrackFrame> frames);
PointScore track_f1(const GroundingBlock& pred, std::span<const GtTrack> gts, double eval_fps = 1.0);

struct HotaScore {
  double hota = 0.0;
  double det_a = 0.0;
  double ass_a = 0.0;
  DetectionCounts counts;
};

// HOTA with binary point-in-mask similarity. Per frame, the matching has
// the most true positives and, among those, the highest global alignment
// score between the paired ids.
HotaScore hota(std::span<const TrackFrame> frames);
HotaScore hota(const GroundingBlock& pred, std::span<const GtTrack> gts, double eval_fps = 1.0);

struct JudgeVerdicts {
  std::vector<bool> model_supported;  // model statement found in human captions
  std::vector<bool> human_supported;  // human statement found in model caption
};

class StatementJudge {
 public:
  virtual ~StatementJudge() = default;
  virtual bool supported(std::string_view statement, std::span<const std::string> reference) const = 0;
};

// Case-, whitespace- and punctuation-insensitive equality.
class ExactMatchJudge final : public StatementJudge {
 public:
  bool supported(std::string_view statement, std::span<const std::string> reference) const override;
};

JudgeVerdicts judge_statements(std::span<const std::string> model_statements,
                               std::span<const std::string> human_statements, const StatementJudge& judge);

struct CaptionItem {
  std::size_t model_statements = 0;
  std::size_t human_statements = 0;
  JudgeVerdicts verdicts;
};

// Precision and recall are averaged over videos; F1 is their harmonic mean.
Prf caption_f1(std::span<const CaptionItem> videos);
Prf caption_video_scores(const CaptionItem& video);

}  // namespace mmforge
