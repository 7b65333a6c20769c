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

// Data-curation procedures: informativeness filtering, clip splitting,
// diversity sampling, decontamination and SAM prompting policy. Mask to
// point extraction lives in mask_geometry.hpp.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mmforge {

struct VideoStats {
  std::string id;
  double duration_s = 0.0;
  int width = 0;
  int height = 0;
  double bit_cost = 0.0;  // bits of the 1 fps re-encoded stream
  std::vector<std::string> keywords;
  double segment_count = 0.0;  // mean segments per sampled frame
};

// bits / (duration * width * height)
double informativeness(double bit_cost, double duration_s, double width, double height);
double informativeness(const VideoStats& video);

struct ScoredVideo {
  std::string id;
  double score = 0.0;
};

struct InformativenessFilter {
  std::vector<std::string> kept;
  std::vector<std::string> removed;
  double mean = 0.0;
  double sigma = 0.0;  // population standard deviation
  double threshold = 0.0;
};

// Keeps videos scoring at least mean - sigma; the boundary is kept.
InformativenessFilter filter_low_information(std::span<const ScoredVideo> scores);

struct ClipSplitOptions {
  int min_s = 10;
  int max_s = 30;
};

struct ClipSplit {
  std::vector<int> cuts;                    // interior boundaries, seconds
  std::vector<std::pair<int, int>> clips;   // [start, end)
  double max_density = 0.0;                 // highest mean density over clips
};

// Partitions a video (one density value per second) into contiguous clips
// with lengths in [min_s, max_s], minimizing the highest per-clip mean
// density. Ties prefer fewer clips, then earlier cuts. Videos shorter than
// 2 * min_s stay a single clip.
ClipSplit split_clips(std::span<const double> per_second_density, const ClipSplitOptions& options = {});

struct DiverseSampleOptions {
  std::size_t target = 0;
  std::size_t chunk = 1000;
  std::uint64_t seed = 0;
};

struct DiverseSample {
  std::vector<std::size_t> indices;  // into the candidate list, in pick order
  std::vector<std::string> ids;
  std::vector<double> entropy;       // keyword entropy after each pick
};

// Shannon entropy (nats) of a keyword count distribution.
double keyword_entropy(const std::map<std::string, std::int64_t>& counts);

// Greedy selection. Each step ranks the candidates of the current chunk by
// descending keyword-entropy gain and by descending 1 / (1 + c), where c is
// how many selected videos share the candidate's rounded segment count, and
// picks the smallest rank sum (ties: lower index). Chunks come from a
// seeded shuffle of the pool and are visited round robin.
DiverseSample greedy_diverse_sample(std::span<const VideoStats> candidates, const DiverseSampleOptions& options);

struct FrameEmbeddings {
  std::string id;
  std::vector<std::vector<float>> frames;  // unit-norm vectors
};

struct DecontaminationOptions {
  double threshold = 0.95;
  std::size_t frames_per_video = 8;
};

struct Decontamination {
  std::vector<std::string> removed;
  std::vector<std::string> kept;
  std::vector<double> max_similarity;  // per pool video, input order
};

// Removes a pool video when any of its frames has cosine similarity
// strictly above the threshold with any evaluation frame.
Decontamination decontaminate(std::span<const FrameEmbeddings> pool, std::span<const FrameEmbeddings> eval,
                              const DecontaminationOptions& options = {}, unsigned threads = 1);

enum class PromptDecision { Keep, Reprompt, DropTrack };

struct PromptThresholds {
  double reprompt_iou = 0.5;
  double max_outside_fraction = 0.2;
  double min_track_iou = 0.5;
};

PromptDecision sam_prompt_policy(double frame_iou, double mask_outside_fraction, double track_mean_iou,
                                 const PromptThresholds& thresholds = {});

}  // namespace mmforge
