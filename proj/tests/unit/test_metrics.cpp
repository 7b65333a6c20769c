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

#include <doctest.h>

#include "../oracles/fixtures.hpp"
#include "mmforge/error.hpp"
#include "mmforge/metrics.hpp"
#include "mmforge/random.hpp"
#include "mmforge/rle_mask.hpp"

using namespace mmforge;

TEST_CASE("close accuracy tolerance") {
  CHECK(close_accuracy(10, 10));
  CHECK(close_accuracy(22, 20));
  CHECK_FALSE(close_accuracy(23, 20));
  CHECK(close_accuracy(1, 0));
  CHECK_FALSE(close_accuracy(2, 0));
  CHECK(close_tolerance(19) == 1);
  CHECK(close_tolerance(20) == 2);
  CHECK(close_tolerance(39) == 2);
  CHECK(close_tolerance(40) == 3);
  CHECK(close_tolerance(100) == 6);
  CHECK(exact_accuracy(7, 7));
  CHECK_FALSE(exact_accuracy(6, 7));
  CHECK_THROWS_AS(close_tolerance(-1), Error);
}

TEST_CASE("rle mask layout is column-major, background first") {
  // 2 x 3 mask, foreground at (x=0, y=1) and (x=2, y=0).
  RleMask m(2, 3, {1, 1, 2, 1, 1});
  CHECK_FALSE(m.contains(0, 0));
  CHECK(m.contains(0, 1));
  CHECK_FALSE(m.contains(1, 0));
  CHECK_FALSE(m.contains(1, 1));
  CHECK(m.contains(2, 0));
  CHECK_FALSE(m.contains(2, 1));
  CHECK(m.area() == 2);
  CHECK_FALSE(m.contains(-1, 0));
  CHECK_FALSE(m.contains(3, 0));

  RleMask leading(1, 2, {0, 2});
  CHECK(leading.contains(0, 0));
  CHECK(leading.contains(1, 0));
  RleMask zero_runs(1, 3, {0, 1, 0, 1, 1});
  CHECK(zero_runs.contains(0, 0));
  CHECK(zero_runs.contains(1, 0));
  CHECK_FALSE(zero_runs.contains(2, 0));

  CHECK_THROWS_AS(RleMask(2, 2, {1, 2}), Error);
  CHECK_THROWS_AS(RleMask(2, 2, {5, -1}), Error);

  CHECK(m.contains_point(0.5, 1.99));
  CHECK(m.contains_point(3.0, 0.0));  // far edge maps onto the last pixel
  CHECK_FALSE(m.contains_point(3.01, 0.0));
}

TEST_CASE("rle mask agrees with a dense oracle") {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const int h = 1 + static_cast<int>(rng.below(64)), w = 1 + static_cast<int>(rng.below(64));
    std::vector<std::uint8_t> dense(static_cast<std::size_t>(h) * w);
    const auto density = rng.below(4);
    for (auto& v : dense) v = rng.below(4) < density ? 1 : 0;
    const auto m = RleMask::from_dense(h, w, dense);
    CHECK(m.to_dense() == dense);
    std::int64_t area = 0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const bool on = dense[static_cast<std::size_t>(y) * w + x] != 0;
        area += on;
        if (m.contains(x, y) != on) FAIL("mismatch at " << x << "," << y);
      }
    CHECK(m.area() == area);
  }
}

TEST_CASE("prf conventions") {
  auto p = prf_from_counts({0, 0, 0});
  CHECK(p.f1 == 1.0);
  p = prf_from_counts({0, 0, 2});
  CHECK(p.precision == 0.0);
  CHECK(p.recall == 0.0);
  CHECK(p.f1 == 0.0);
  p = prf_from_counts({1, 2, 1});
  CHECK(p.precision == doctest::Approx(1.0 / 3));
  CHECK(p.recall == 0.5);
  CHECK(p.f1 == doctest::Approx(0.4));
}

TEST_CASE("point F1") {
  std::vector<GtTrack> gts(2);
  gts[0] = {1, {{1.0, fixture::rect(100, 100, 0, 0, 50, 100)}}};
  gts[1] = {2, {{1.0, fixture::rect(100, 100, 50, 0, 100, 100)}}};

  auto perfect = parse_grounding("<points coords=\"1.0 1 250 500 2 750 500\">x</points>");
  auto s = point_f1(perfect, gts);
  CHECK(s.prf.f1 == 1.0);

  // Two points on object 1, one outside any annotated time.
  auto crowded = parse_grounding("<points coords=\"1.0 1 100 100 2 200 200;9.0 3 800 800\">x</points>");
  s = point_f1(crowded, gts);
  CHECK(s.counts.tp == 1);
  CHECK(s.counts.fp == 2);
  CHECK(s.counts.fn == 1);
  CHECK(s.prf.precision == doctest::Approx(1.0 / 3));
  CHECK(s.prf.recall == 0.5);
  CHECK(s.prf.f1 == doctest::Approx(0.4));

  s = point_f1(parse_grounding("<points coords=\"\">none</points>"), gts);
  CHECK(s.prf.recall == 0.0);
  CHECK(s.prf.f1 == 0.0);

  // The time window is inclusive at 1.5 s.
  CHECK(point_f1(parse_grounding("<points coords=\"2.5 1 250 500\">x</points>"), gts).counts.tp == 1);
  CHECK(point_f1(parse_grounding("<points coords=\"2.6 1 250 500\">x</points>"), gts).counts.tp == 0);

  CHECK_THROWS_AS(point_f1(parse_grounding(fixture::kPerfect), gts), Error);
  CHECK_THROWS_AS(point_f1(parse_grounding("<points coords=\"1 1 5 5\">x</points>"), gts), Error);
  std::vector<GtTrack> mixed{gts[0], {3, {{1.0, fixture::rect(10, 10, 0, 0, 5, 5)}}}};
  try {
    point_f1(perfect, mixed);
    FAIL("expected MaskDimMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MaskDimMismatch);
  }
}

TEST_CASE("track F1") {
  const auto gts = fixture::two_halves();
  CHECK(track_f1(parse_grounding(fixture::kPerfect), gts).prf.f1 == 1.0);
  // Identity-blind: swapping ids keeps F1.
  CHECK(track_f1(parse_grounding(fixture::kIdSwap), gts).prf.f1 == 1.0);
  // Half the frames predicted.
  auto half = parse_grounding("<tracks coords=\"0.0 1 250 500 2 750 500;1.0 1 250 500 2 750 500\">x</tracks>");
  auto s = track_f1(half, gts);
  CHECK(s.prf.recall == 0.5);
  CHECK(s.prf.precision == 1.0);
  // Off-grid predictions are ignored at 1 fps.
  auto off = parse_grounding("<tracks coords=\"0.5 1 250 500\">x</tracks>");
  CHECK(track_f1(off, gts).counts.fp == 0);
  CHECK_THROWS_AS(track_f1(parse_grounding("<points coords=\"1.0 1 1 1\">x</points>"), gts), Error);
}

TEST_CASE("caption F1") {
  const std::vector<std::string> model{"A dog runs.", "The sky is green"};
  const std::vector<std::string> human{"a dog  runs", "It is sunny"};
  ExactMatchJudge judge;
  const auto v = judge_statements(model, human, judge);
  CHECK(v.model_supported == std::vector<bool>{true, false});
  CHECK(v.human_supported == std::vector<bool>{true, false});

  std::vector<CaptionItem> videos{{2, 2, {{true, true}, {true, false}}}, {2, 2, {{true, false}, {true, true}}}};
  auto p = caption_f1(videos);
  CHECK(p.precision == 0.75);
  CHECK(p.recall == 0.75);
  CHECK(p.f1 == 0.75);

  CHECK(caption_f1(std::vector<CaptionItem>{{1, 1, {{true}, {true}}}}).f1 == 1.0);
  auto empty_model = caption_video_scores({0, 2, {{}, {false, false}}});
  CHECK(empty_model.precision == 0.0);
  auto both_empty = caption_video_scores({0, 0, {}});
  CHECK(both_empty.precision == 1.0);
  CHECK(both_empty.recall == 1.0);
  try {
    caption_video_scores({2, 1, {{true}, {true}}});
    FAIL("expected ArityMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ArityMismatch);
  }
}
