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

// Writes a deterministic synthetic packing workload: a mix of multi-crop
// images and videos, each carrying several annotation branches, as a
// {"id", "text_tokens", "crops"} manifest.

#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "mmforge/frame_sampler.hpp"
#include "mmforge/message_tree.hpp"
#include "mmforge/random.hpp"

namespace {

using namespace mmforge;

std::int64_t between(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

}  // namespace

int main(int argc, char** argv) {
  const long count = argc > 1 ? std::strtol(argv[1], nullptr, 10) : 2000;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20260901;
  Rng rng(seed);
  SamplerConfig cfg;

  for (long i = 0; i < count; ++i) {
    std::vector<PrefixSegment> prefix;
    std::int64_t crops = 0;
    const bool video = rng.uniform() < 0.4;
    if (video) {
      const double duration = static_cast<double>(between(rng, 5, 40));
      const auto plan = sample_timestamps(duration, cfg);
      prefix.push_back({TokenKind::Visual, video_tokens(plan.pathway, cfg)});
      if (rng.uniform() < 0.5) prefix.push_back({TokenKind::Text, between(rng, 8, 120)});  // subtitles
      crops = static_cast<std::int64_t>(plan.timestamps.size());
    } else {
      const auto width = static_cast<int>(between(rng, 200, 1600));
      const auto height = static_cast<int>(between(rng, 200, 1600));
      const auto plan = plan_crops(width, height, cfg);
      prefix.push_back({TokenKind::Visual, plan.total_tokens()});
      crops = plan.total_crops;
    }
    // Annotation count is about four per example.
    const auto annotations = between(rng, 2, 6);
    std::vector<Branch> branches;
    for (std::int64_t a = 0; a < annotations; ++a)
      branches.push_back({{Role::User, between(rng, 12, 60), 0.0}, {Role::Assistant, between(rng, 20, 400), 0.0}});
    const auto example = linearize(build_tree(std::move(prefix), std::move(branches)));
    nlohmann::json j = {{"id", (video ? "vid-" : "img-") + std::to_string(i)},
                        {"text_tokens", example.total_len},
                        {"crops", crops}};
    std::cout << j.dump() << '\n';
  }
}
