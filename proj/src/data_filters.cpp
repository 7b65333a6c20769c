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

#include "mmforge/data_filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmforge/error.hpp"
#include "mmforge/parallel.hpp"
#include "mmforge/random.hpp"

namespace mmforge {

double informativeness(double bit_cost, double duration_s, double width, double height) {
  if (!(bit_cost > 0.0) || !(duration_s > 0.0) || !(width > 0.0) || !(height > 0.0))
    fail(ErrorCode::NonPositive, "bits, duration and frame size must be positive");
  return bit_cost / (duration_s * width * height);
}

double informativeness(const VideoStats& video) {
  return informativeness(video.bit_cost, video.duration_s, video.width, video.height);
}

InformativenessFilter filter_low_information(std::span<const ScoredVideo> scores) {
  if (scores.size() < 2) fail(ErrorCode::TooFew, "need at least two scores");
  InformativenessFilter out;
  const auto n = static_cast<double>(scores.size());
  for (const auto& s : scores) out.mean += s.score;
  out.mean /= n;
  double var = 0.0;
  for (const auto& s : scores) var += (s.score - out.mean) * (s.score - out.mean);
  out.sigma = std::sqrt(var / n);
  out.threshold = out.mean - out.sigma;
  const double slack = 1e-12 * std::max(1.0, std::abs(out.threshold));
  for (const auto& s : scores) (s.score >= out.threshold - slack ? out.kept : out.removed).push_back(s.id);
  return out;
}

ClipSplit split_clips(std::span<const double> density, const ClipSplitOptions& options) {
  const int min_s = options.min_s, max_s = options.max_s;
  if (min_s < 1 || max_s < min_s) fail(ErrorCode::InvalidArgument, "clip bounds must satisfy 1 <= min <= max");
  const int n = static_cast<int>(density.size());
  if (n < min_s) fail(ErrorCode::TooShort, "video is shorter than the minimum clip length");

  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + density[i];
  auto cost = [&](int a, int b) { return (prefix[b] - prefix[a]) / (b - a); };

  ClipSplit out;
  auto finish = [&](std::vector<int> bounds) {
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
      out.clips.emplace_back(bounds[i], bounds[i + 1]);
      if (i > 0) out.cuts.push_back(bounds[i]);
    }
    out.max_density = -std::numeric_limits<double>::infinity();
    for (auto [a, b] : out.clips) out.max_density = std::max(out.max_density, cost(a, b));
    return out;
  };
  if (n < 2 * min_s) return finish({0, n});

  // 1. Smallest achievable maximum clip density.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(static_cast<std::size_t>(n) + 1, inf);
  best[0] = -inf;
  for (int i = min_s; i <= n; ++i)
    for (int j = std::max(0, i - max_s); j <= i - min_s; ++j)
      if (best[j] < inf) best[i] = std::min(best[i], std::max(best[j], cost(j, i)));
  if (best[n] == inf) fail(ErrorCode::InvalidArgument, "no partition satisfies the clip length bounds");
  const double limit = best[n] + 1e-12 * std::max(1.0, std::abs(best[n]));

  // 2. Fewest clips for every suffix using only clips within the limit.
  constexpr int kNone = std::numeric_limits<int>::max();
  std::vector<int> clips(static_cast<std::size_t>(n) + 1, kNone);
  clips[n] = 0;
  for (int i = n - min_s; i >= 0; --i)
    for (int j = i + min_s; j <= std::min(n, i + max_s); ++j)
      if (clips[j] != kNone && cost(i, j) <= limit) clips[i] = std::min(clips[i], clips[j] + 1);

  // 3. Earliest cuts that keep the clip count minimal.
  std::vector<int> bounds{0};
  for (int pos = 0; pos < n;) {
    for (int j = pos + min_s; j <= std::min(n, pos + max_s); ++j) {
      if (clips[j] != kNone && clips[j] + 1 == clips[pos] && cost(pos, j) <= limit) {
        bounds.push_back(j);
        pos = j;
        break;
      }
    }
  }
  return finish(std::move(bounds));
}

double keyword_entropy(const std::map<std::string, std::int64_t>& counts) {
  double total = 0.0, acc = 0.0;
  for (const auto& [kw, c] : counts) {
    if (c <= 0) continue;
    total += static_cast<double>(c);
    acc += static_cast<double>(c) * std::log(static_cast<double>(c));
  }
  return total > 0.0 ? std::log(total) - acc / total : 0.0;
}

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Competition ranks (0 = best) for descending values. Values within a
// relative 1e-12 count as tied so that equal gains computed along different
// summation orders do not split.
std::vector<std::size_t> descending_ranks(const std::vector<double>& values) {
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::size_t> ranks;
  ranks.reserve(values.size());
  for (double v : values) {
    const double bar = v + 1e-12 * std::max(1.0, std::abs(v));
    ranks.push_back(static_cast<std::size_t>(
        std::partition_point(sorted.begin(), sorted.end(), [bar](double x) { return x > bar; }) - sorted.begin()));
  }
  return ranks;
}

}  // namespace

DiverseSample greedy_diverse_sample(std::span<const VideoStats> candidates, const DiverseSampleOptions& options) {
  const std::size_t n = candidates.size();
  if (options.target > n) fail(ErrorCode::TargetTooLarge, "target exceeds the candidate count");
  if (options.chunk == 0) fail(ErrorCode::InvalidArgument, "chunk size must be positive");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (n > options.chunk) {
    Rng rng(options.seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  }
  const std::size_t chunk_count = (n + options.chunk - 1) / options.chunk;

  // Per-candidate keyword multiplicities.
  std::vector<std::map<std::string, std::int64_t>> bags(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& kw : candidates[i].keywords) ++bags[i][kw];

  std::map<std::string, std::int64_t> counts;
  std::map<std::int64_t, std::int64_t> bins;
  double total = 0.0, sum_xlogx = 0.0;
  std::vector<char> taken(n, 0);

  DiverseSample out;
  std::size_t cursor = 0;
  while (out.indices.size() < options.target) {
    std::vector<std::size_t> pool;
    for (std::size_t tries = 0; tries < chunk_count && pool.empty(); ++tries, cursor = (cursor + 1) % chunk_count) {
      const std::size_t begin = cursor * options.chunk, end = std::min(n, begin + options.chunk);
      for (std::size_t k = begin; k < end; ++k)
        if (!taken[order[k]]) pool.push_back(order[k]);
      if (!pool.empty()) {
        cursor = (cursor + 1) % chunk_count;
        break;
      }
    }
    std::sort(pool.begin(), pool.end());

    const double entropy = total > 0.0 ? std::log(total) - sum_xlogx / total : 0.0;
    std::vector<double> gain, density;
    for (std::size_t idx : pool) {
      double t = total, s = sum_xlogx;
      for (const auto& [kw, m] : bags[idx]) {
        auto it = counts.find(kw);
        const double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        s += xlogx(c + static_cast<double>(m)) - xlogx(c);
        t += static_cast<double>(m);
      }
      gain.push_back((t > 0.0 ? std::log(t) - s / t : 0.0) - entropy);
      auto bin = bins.find(std::llround(candidates[idx].segment_count));
      density.push_back(1.0 / (1.0 + (bin == bins.end() ? 0.0 : static_cast<double>(bin->second))));
    }
    const auto gain_rank = descending_ranks(gain);
    const auto density_rank = descending_ranks(density);
    std::size_t pick = 0;
    for (std::size_t k = 1; k < pool.size(); ++k)
      if (gain_rank[k] + density_rank[k] < gain_rank[pick] + density_rank[pick]) pick = k;

    const std::size_t chosen = pool[pick];
    taken[chosen] = 1;
    for (const auto& [kw, m] : bags[chosen]) {
      auto& c = counts[kw];
      sum_xlogx += xlogx(static_cast<double>(c + m)) - xlogx(static_cast<double>(c));
      c += m;
      total += static_cast<double>(m);
    }
    ++bins[std::llround(candidates[chosen].segment_count)];
    out.indices.push_back(chosen);
    out.ids.push_back(candidates[chosen].id);
    out.entropy.push_back(keyword_entropy(counts));
  }
  return out;
}

namespace {

std::vector<const std::vector<float>*> subsample_frames(const FrameEmbeddings& video, std::size_t limit) {
  std::vector<const std::vector<float>*> out;
  const std::size_t n = video.frames.size();
  if (n <= limit || limit == 0) {
    for (const auto& f : video.frames) out.push_back(&f);
    return out;
  }
  if (limit == 1) return {&video.frames[n / 2]};
  for (std::size_t i = 0; i < limit; ++i) out.push_back(&video.frames[(2 * i * (n - 1) + (limit - 1)) / (2 * (limit - 1))]);
  return out;
}

}  // namespace

Decontamination decontaminate(std::span<const FrameEmbeddings> pool, std::span<const FrameEmbeddings> eval,
                              const DecontaminationOptions& options, unsigned threads) {
  std::vector<const std::vector<float>*> reference;
  for (const auto& v : eval)
    for (const auto* f : subsample_frames(v, options.frames_per_video)) reference.push_back(f);
  if (reference.empty()) fail(ErrorCode::EmptyEval, "no evaluation frames");
  const std::size_t dim = reference.front()->size();
  for (const auto* f : reference)
    if (f->size() != dim) fail(ErrorCode::InvalidArgument, "embedding dimensions differ");

  Decontamination out;
  out.max_similarity.assign(pool.size(), -std::numeric_limits<double>::infinity());
  parallel_for(pool.size(), threads, [&](std::size_t i) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto* f : subsample_frames(pool[i], options.frames_per_video)) {
      if (f->size() != dim) fail(ErrorCode::InvalidArgument, "embedding dimensions differ for '" + pool[i].id + "'");
      for (const auto* r : reference) {
        double dot = 0.0;
        for (std::size_t d = 0; d < dim; ++d) dot += static_cast<double>((*f)[d]) * static_cast<double>((*r)[d]);
        best = std::max(best, dot);
      }
    }
    out.max_similarity[i] = best;
  });
  for (std::size_t i = 0; i < pool.size(); ++i)
    (out.max_similarity[i] > options.threshold ? out.removed : out.kept).push_back(pool[i].id);
  return out;
}

PromptDecision sam_prompt_policy(double frame_iou, double mask_outside_fraction, double track_mean_iou,
                                 const PromptThresholds& thresholds) {
  for (double v : {frame_iou, mask_outside_fraction, track_mean_iou})
    if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::OutOfUnitInterval, "IoU and fractions must lie in [0, 1]");
  if (track_mean_iou < thresholds.min_track_iou) return PromptDecision::DropTrack;
  if (frame_iou < thresholds.reprompt_iou || mask_outside_fraction > thresholds.max_outside_fraction)
    return PromptDecision::Reprompt;
  return PromptDecision::Keep;
}

}  // namespace mmforge
