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

#include <cmath>
#include <numeric>

#include "../oracles/weight_oracle.hpp"
#include "mmforge/error.hpp"
#include "mmforge/loss_weighting.hpp"
#include "mmforge/random.hpp"

using namespace mmforge;

TEST_CASE("token weights") {
  CHECK(token_weight(TaskKind::Other, 16) == 1.0);
  CHECK(token_weight(TaskKind::Other, 4) == 2.0);
  CHECK(token_weight(TaskKind::Other, 1) == 4.0);
  CHECK(token_weight(TaskKind::VideoCaption, 999) == 0.1);
  CHECK(token_weight(TaskKind::Pointing, 1) == 0.2);
  for (std::int64_t n = 1; n <= 200000; ++n) CHECK(oracle::correctly_rounded_quarter(token_weight(TaskKind::Other, n), n));
  // On perfect squares the weight is the correctly rounded quotient 4 / k.
  for (std::int64_t k = 1; k <= 1000; ++k) CHECK(token_weight(TaskKind::Other, k * k) == 4.0 / static_cast<double>(k));
  for (std::int64_t n = 1; n < 5000; ++n) CHECK(token_weight(TaskKind::Other, n) > token_weight(TaskKind::Other, n + 1));
  try {
    token_weight(TaskKind::Other, 0);
    FAIL("expected NonPositiveCount");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveCount);
  }
}

TEST_CASE("task labels") {
  CHECK(task_kind_from_label("video_caption") == TaskKind::VideoCaption);
  CHECK(task_kind_from_label("Video Caption") == TaskKind::VideoCaption);
  CHECK(task_kind_from_label("pointing") == TaskKind::Pointing);
  CHECK(task_kind_from_label("tracking") == TaskKind::Pointing);
  CHECK(task_kind_from_label("tracking", {false}) == TaskKind::Other);
  CHECK(task_kind_from_label("vqa") == TaskKind::Other);
}

TEST_CASE("assign weights per assistant message") {
  Branch b{{Role::User, 10, 0.0}, {Role::Assistant, 16, 0.0}, {Role::User, 3, 0.0}, {Role::Assistant, 4, 0.0}};
  assign_weights(b, TaskKind::Other);
  CHECK(b[0].weight == 0.0);
  CHECK(b[1].weight == 1.0);
  CHECK(b[2].weight == 0.0);
  CHECK(b[3].weight == 2.0);
  assign_weights(b, TaskKind::Pointing);
  CHECK(b[1].weight == 0.2);
  CHECK(b[3].weight == 0.2);
}

TEST_CASE("gradient scale is the device mean") {
  CHECK(grad_scale(std::vector<std::int64_t>{100, 100, 100, 100}) == 100.0);
  CHECK(grad_scale(std::vector<std::int64_t>{50, 150}) == 100.0);
  CHECK(grad_scale(std::vector<std::int64_t>{0, 200}) == 100.0);
  CHECK_THROWS_AS(grad_scale(std::vector<std::int64_t>{0, 0}), Error);
  CHECK_THROWS_AS(grad_scale(std::vector<std::int64_t>{}), Error);
  CHECK_THROWS_AS(grad_scale(std::vector<std::int64_t>{-1, 3}), Error);
}

TEST_CASE("device-mean normalization reproduces the global token mean") {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t devices = 1 + rng.below(16);
    std::vector<std::int64_t> tokens(devices);
    std::vector<double> loss(devices);
    for (std::size_t d = 0; d < devices; ++d) {
      tokens[d] = static_cast<std::int64_t>(rng.below(5000));
      loss[d] = static_cast<double>(tokens[d]) * rng.uniform() * 3.0;
    }
    if (std::accumulate(tokens.begin(), tokens.end(), std::int64_t{0}) == 0) tokens[0] = 1;
    const double scale = grad_scale(tokens);
    double averaged = 0.0;
    for (double l : loss) averaged += l / scale;
    averaged /= static_cast<double>(devices);
    const double global = std::accumulate(loss.begin(), loss.end(), 0.0) /
                          static_cast<double>(std::accumulate(tokens.begin(), tokens.end(), std::int64_t{0}));
    CHECK(std::abs(averaged - global) <= 1e-12 * std::max(1.0, std::abs(global)));
  }
}
