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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mmforge {

struct SamplerConfig {
  double sample_fps = 2.0;
  int max_frames = 128;          // 384 for long-context runs
  int crop_limit = 8;            // 24 at inference
  int crop_side = 378;           // pixels
  int patch = 14;                // pixels
  int overlap_patches = 4;       // shared margin between adjacent crops
  int image_pool = 2;
  int video_pool = 3;
  int fast_pool = 9;
  int per_frame_extra_tokens = 2;

  int patches_per_side() const { return crop_side / patch; }
  // Throws InvalidArgument on a config that cannot be tiled.
  void validate() const;
};

enum class Pathway { Slow, Fast };

struct FrameSamplingPlan {
  std::vector<double> timestamps;  // seconds
  std::vector<Pathway> pathway;
  int periodicity = 1;
};

FrameSamplingPlan sample_timestamps(double duration_s, const SamplerConfig& cfg = {});

// Point tracks are annotated on the sample_fps grid, so long videos are
// trimmed to the first max_frames ticks instead of being subsampled, and the
// off-grid final frame is never added.
FrameSamplingPlan tracking_timestamps(double duration_s, const SamplerConfig& cfg = {});

struct PooledGrid {
  int rows = 0;
  int cols = 0;
  int tokens = 0;
};

// Edge windows that do not fill a whole pool are pooled with fewer patches,
// so each side is ceil(patches / pool).
PooledGrid pooled_grid(int patches_per_side, int pool);

struct CropPlan {
  int rows = 1;
  int cols = 1;
  bool includes_global_crop = true;
  // Size the source image is resized to before tiling.
  int resize_width = 0;
  int resize_height = 0;
  // Fraction of source resolution kept, in (0, 1].
  double retained = 1.0;
  int tokens_per_crop = 0;
  int total_crops = 0;

  int tiles() const { return rows * cols; }
  int total_tokens() const { return total_crops * tokens_per_crop; }
};

CropPlan plan_crops(int width, int height, const SamplerConfig& cfg = {});

// Vision tokens for one video frame: pooled patches plus per-frame specials.
int frame_tokens(Pathway pathway, const SamplerConfig& cfg = {});
std::int64_t video_tokens(std::span<const Pathway> pathway, const SamplerConfig& cfg = {});

struct SlowFastAssignment {
  std::optional<int> periodicity;  // unset for score-based selection
  std::vector<Pathway> pathway;

  int slow_count() const;
};

// Frame-count bounds for periodicity 1..4.
inline constexpr int kSlowFastMaxFrames[] = {128, 224, 300, 368};

SlowFastAssignment slowfast_periodic(int frame_count);

// Picks slow frames from per-frame relevance scores: the best frame of each
// of slow_frames/2 temporal groups, then the slow_frames/2 highest of the
// rest. Falls back to the periodic scheme when effective_fps >= 2.
SlowFastAssignment slowfast_scored(std::span<const double> scores, int slow_frames, double effective_fps);

}  // namespace mmforge
