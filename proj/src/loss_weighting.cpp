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

#include "mmforge/loss_weighting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>

#include "mmforge/error.hpp"

namespace mmforge {

namespace {

__extension__ typedef unsigned __int128 u128;

// Compares t * n with 2^s exactly in 192-bit arithmetic: -1, 0 or 1.
int compare_product_pow2(u128 t, std::uint64_t n, int s) {
  const u128 lo = static_cast<u128>(static_cast<std::uint64_t>(t)) * n;
  const u128 hi = static_cast<u128>(static_cast<std::uint64_t>(t >> 64)) * n;
  const u128 mid = (lo >> 64) + static_cast<std::uint64_t>(hi);
  const std::uint64_t prod[3] = {static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(mid),
                                 static_cast<std::uint64_t>(hi >> 64) + static_cast<std::uint64_t>(mid >> 64)};
  std::uint64_t pow[3] = {0, 0, 0};
  if (s < 0) return 1;  // t * n >= 1 > 2^s
  if (s >= 192) return -1;
  pow[s / 64] = std::uint64_t{1} << (s % 64);
  for (int i = 2; i >= 0; --i)
    if (prod[i] != pow[i]) return prod[i] < pow[i] ? -1 : 1;
  return 0;
}

// Whether 4 / sqrt(n) rounds to w: with w = m * 2^e, the value must lie
// between the midpoints to the neighbouring doubles. Squaring gives
// (2m - 1)^2 * n <= 2^(6 - 2e) <= (2m + 1)^2 * n, with a quarter ulp below
// powers of two. Equality is impossible for n >= 1, so ties never arise.
bool rounds_to(double w, std::uint64_t n) {
  int exp = 0;
  const double frac = std::frexp(w, &exp);
  const auto m = static_cast<u128>(std::ldexp(frac, 53));
  const int s = 6 - 2 * (exp - 53);
  const bool pow2 = m == (u128{1} << 52);
  const u128 below = pow2 ? 4 * m - 1 : 2 * m - 1;
  return compare_product_pow2(below * below, n, pow2 ? s + 2 : s) <= 0 &&
         compare_product_pow2((2 * m + 1) * (2 * m + 1), n, s) >= 0;
}

// 4 / sqrt(n) correctly rounded. The two-step quotient is within a few
// ulps (n itself rounds when above 2^53); the exact test picks the nearest
// double among its neighbours.
double inverse_sqrt_weight(std::int64_t n) {
  const double estimate = 4.0 / std::sqrt(static_cast<double>(n));
  const auto un = static_cast<std::uint64_t>(n);
  if (rounds_to(estimate, un)) return estimate;
  double down = estimate, up = estimate;
  for (int step = 0; step < 8; ++step) {
    down = std::nextafter(down, 0.0);
    up = std::nextafter(up, 8.0);
    if (rounds_to(down, un)) return down;
    if (rounds_to(up, un)) return up;
  }
  return estimate;
}

}  // namespace

TaskKind task_kind_from_label(std::string_view label, const TaskLabelOptions& options) {
  std::string key;
  for (char c : label) key += c == '-' || c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "video_caption" || key == "video_captioning" || key == "dense_video_caption") return TaskKind::VideoCaption;
  if (key == "pointing" || key == "video_pointing" || key == "image_pointing" || key == "counting" ||
      key == "point_count")
    return TaskKind::Pointing;
  if (key == "tracking" || key == "video_tracking" || key == "point_tracking")
    return options.tracking_as_pointing ? TaskKind::Pointing : TaskKind::Other;
  return TaskKind::Other;
}

double token_weight(TaskKind kind, std::int64_t answer_tokens) {
  if (answer_tokens < 1) fail(ErrorCode::NonPositiveCount, "answer token count must be >= 1");
  switch (kind) {
    case TaskKind::VideoCaption: return 0.1;
    case TaskKind::Pointing: return 0.2;
    case TaskKind::Other: break;
  }
  return inverse_sqrt_weight(answer_tokens);
}

void assign_weights(Branch& branch, TaskKind kind) {
  for (auto& m : branch) m.weight = m.role == Role::Assistant ? token_weight(kind, m.tokens) : 0.0;
}

double grad_scale(std::span<const std::int64_t> per_device_loss_tokens) {
  if (per_device_loss_tokens.empty()) fail(ErrorCode::InvalidArgument, "need at least one device");
  std::int64_t total = 0;
  for (auto n : per_device_loss_tokens) {
    if (n < 0) fail(ErrorCode::InvalidArgument, "loss token counts must be non-negative");
    total += n;
  }
  if (total == 0) fail(ErrorCode::AllZero, "no device has loss tokens");
  return static_cast<double>(total) / static_cast<double>(per_device_loss_tokens.size());
}

}  // namespace mmforge
