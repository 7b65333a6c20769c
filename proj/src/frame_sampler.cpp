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

#include "mmforge/frame_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmforge/error.hpp"

namespace mmforge {

namespace {

constexpr double kTickEps = 1e-9;

std::int64_t last_tick(double duration_s, double fps) {
  return static_cast<std::int64_t>(std::floor(duration_s * fps + kTickEps));
}

void check_duration(double duration_s) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    fail(ErrorCode::NonPositiveDuration, "video duration must be positive");
}

}  // namespace

void SamplerConfig::validate() const {
  if (!(sample_fps > 0.0)) fail(ErrorCode::InvalidArgument, "sample_fps must be positive");
  if (max_frames < 1 || crop_limit < 1) fail(ErrorCode::InvalidArgument, "frame and crop limits must be positive");
  if (patch < 1 || crop_side < patch || crop_side % patch != 0)
    fail(ErrorCode::InvalidArgument, "crop_side must be a positive multiple of patch");
  if (overlap_patches < 0 || 2 * overlap_patches >= patches_per_side())
    fail(ErrorCode::InvalidArgument, "overlap must leave a non-empty crop window");
  if (image_pool < 1 || video_pool < 1 || fast_pool < 1 || per_frame_extra_tokens < 0)
    fail(ErrorCode::InvalidArgument, "pool sizes must be positive");
}

FrameSamplingPlan sample_timestamps(double duration_s, const SamplerConfig& cfg) {
  check_duration(duration_s);
  cfg.validate();
  std::vector<double> candidates;
  std::int64_t ticks = last_tick(duration_s, cfg.sample_fps);
  candidates.reserve(static_cast<std::size_t>(ticks) + 2);
  for (std::int64_t k = 0; k <= ticks; ++k) candidates.push_back(static_cast<double>(k) / cfg.sample_fps);
  if (duration_s - candidates.back() > kTickEps)
    candidates.push_back(duration_s);
  else
    candidates.back() = duration_s;

  FrameSamplingPlan plan;
  auto n = static_cast<std::int64_t>(candidates.size());
  std::int64_t f = cfg.max_frames;
  if (n <= f) {
    plan.timestamps = std::move(candidates);
  } else if (f == 1) {
    plan.timestamps = {candidates.back()};
  } else {
    // round(i * (n - 1) / (f - 1)), half up, in integer arithmetic.
    for (std::int64_t i = 0; i < f; ++i) {
      std::int64_t index = (2 * i * (n - 1) + (f - 1)) / (2 * (f - 1));
      if (plan.timestamps.empty() || candidates[index] != plan.timestamps.back())
        plan.timestamps.push_back(candidates[index]);
    }
  }
  plan.pathway.assign(plan.timestamps.size(), Pathway::Slow);
  return plan;
}

FrameSamplingPlan tracking_timestamps(double duration_s, const SamplerConfig& cfg) {
  check_duration(duration_s);
  cfg.validate();
  std::int64_t ticks = std::min<std::int64_t>(last_tick(duration_s, cfg.sample_fps), cfg.max_frames - 1);
  FrameSamplingPlan plan;
  for (std::int64_t k = 0; k <= ticks; ++k) plan.timestamps.push_back(static_cast<double>(k) / cfg.sample_fps);
  plan.pathway.assign(plan.timestamps.size(), Pathway::Slow);
  return plan;
}

PooledGrid pooled_grid(int patches_per_side, int pool) {
  if (patches_per_side < 1 || pool < 1) fail(ErrorCode::InvalidArgument, "patches and pool must be positive");
  int side = (patches_per_side + pool - 1) / pool;
  return {side, side, side * side};
}

CropPlan plan_crops(int width, int height, const SamplerConfig& cfg) {
  if (width <= 0 || height <= 0) fail(ErrorCode::InvalidArgument, "image size must be positive");
  cfg.validate();
  const int overlap = cfg.overlap_patches * cfg.patch;
  const int stride = cfg.crop_side - overlap;
  auto extent = [&](int n) { return n * stride + overlap; };

  // Aspect-preserving scale at which the source fits a grid; >= 1 means the
  // grid covers the image at native resolution.
  struct Choice {
    int rows = 1, cols = 1;
    double scale = 0.0;
  };
  std::optional<Choice> best;
  for (int rows = 1; rows <= cfg.crop_limit; ++rows) {
    for (int cols = 1; rows * cols <= cfg.crop_limit; ++cols) {
      double scale = std::min(static_cast<double>(extent(rows)) / height, static_cast<double>(extent(cols)) / width);
      Choice c{rows, cols, scale};
      if (!best) {
        best = c;
        continue;
      }
      bool c_covers = c.scale >= 1.0, best_covers = best->scale >= 1.0;
      int c_tiles = rows * cols, best_tiles = best->rows * best->cols;
      bool better;
      if (c_covers != best_covers)
        better = c_covers;
      else if (c_covers)  // fewest tiles, then least upscaling
        better = c_tiles < best_tiles || (c_tiles == best_tiles && c.scale < best->scale);
      else  // largest scale, then fewest tiles
        better = c.scale > best->scale || (c.scale == best->scale && c_tiles < best_tiles);
      if (better) best = c;
    }
  }

  CropPlan plan;
  plan.rows = best->rows;
  plan.cols = best->cols;
  plan.resize_width = extent(plan.cols);
  plan.resize_height = extent(plan.rows);
  plan.retained = std::min(1.0, best->scale) * std::min(1.0, best->scale);
  plan.includes_global_crop = true;
  plan.tokens_per_crop = pooled_grid(cfg.patches_per_side(), cfg.image_pool).tokens;
  plan.total_crops = plan.tiles() + 1;
  return plan;
}

int frame_tokens(Pathway pathway, const SamplerConfig& cfg) {
  int pool = pathway == Pathway::Slow ? cfg.video_pool : cfg.fast_pool;
  return pooled_grid(cfg.patches_per_side(), pool).tokens + cfg.per_frame_extra_tokens;
}

std::int64_t video_tokens(std::span<const Pathway> pathway, const SamplerConfig& cfg) {
  std::int64_t total = 0;
  for (Pathway p : pathway) total += frame_tokens(p, cfg);
  return total;
}

int SlowFastAssignment::slow_count() const {
  return static_cast<int>(std::count(pathway.begin(), pathway.end(), Pathway::Slow));
}

SlowFastAssignment slowfast_periodic(int frame_count) {
  if (frame_count < 0) fail(ErrorCode::InvalidArgument, "frame count must be non-negative");
  int p = 0;
  for (int i = 0; i < 4; ++i) {
    if (frame_count <= kSlowFastMaxFrames[i]) {
      p = i + 1;
      break;
    }
  }
  if (p == 0) fail(ErrorCode::TooManyFrames, std::to_string(frame_count) + " frames exceeds the SlowFast limit of 368");
  SlowFastAssignment out;
  out.periodicity = p;
  out.pathway.resize(static_cast<std::size_t>(frame_count));
  for (int i = 0; i < frame_count; ++i) out.pathway[i] = i % p == 0 ? Pathway::Slow : Pathway::Fast;
  return out;
}

SlowFastAssignment slowfast_scored(std::span<const double> scores, int slow_frames, double effective_fps) {
  const int total = static_cast<int>(scores.size());
  if (slow_frames < 2 || slow_frames % 2 != 0 || slow_frames > total)
    fail(ErrorCode::BadArity, "slow frame count must be even, positive and at most the frame count");
  if (effective_fps >= 2.0) return slowfast_periodic(total);

  const int half = slow_frames / 2;
  const int group = total / half;  // last group absorbs the remainder
  std::vector<bool> slow(static_cast<std::size_t>(total), false);
  for (int g = 0; g < half; ++g) {
    int begin = g * group;
    int end = g + 1 == half ? total : begin + group;
    int pick = begin;
    for (int i = begin + 1; i < end; ++i)
      if (scores[i] > scores[pick]) pick = i;
    slow[pick] = true;
  }
  std::vector<int> rest;
  for (int i = 0; i < total; ++i)
    if (!slow[i]) rest.push_back(i);
  std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) { return scores[a] > scores[b]; });
  for (int i = 0; i < half; ++i) slow[rest[i]] = true;

  SlowFastAssignment out;
  out.pathway.reserve(slow.size());
  for (bool s : slow) out.pathway.push_back(s ? Pathway::Slow : Pathway::Fast);
  return out;
}

}  // namespace mmforge
