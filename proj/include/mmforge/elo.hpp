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

// Bradley-Terry strengths from pairwise preferences and bootstrapped Elo
// ratings.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mmforge {

enum class Outcome { AWins, BWins, Tie };

struct Battle {
  std::string model_a;
  std::string model_b;
  Outcome outcome = Outcome::Tie;
};

struct BradleyTerryOptions {
  double tolerance = 1e-9;  // max relative change between iterations
  int max_iterations = 100000;
};

// Maximum-likelihood strengths, ties counted as half a win for each side,
// normalized to geometric mean 1. Throws DisconnectedGraph when some models
// were never compared (even indirectly) and DegenerateWins when the win
// graph is not strongly connected, in which case no finite maximum exists.
std::map<std::string, double> fit_bradley_terry(std::span<const Battle> battles,
                                                const BradleyTerryOptions& options = {});

inline constexpr double kEloAnchor = 1000.0;
inline constexpr double kEloScale = 400.0;

// r_i = 1000 + (400 / ln 10) * (ln s_i - mean_j ln s_j)
std::map<std::string, double> elo_ratings(const std::map<std::string, double>& strengths);

struct EloSummary {
  std::string model;
  double point = 0.0;   // rating fitted on the full battle set
  double median = 0.0;
  double ci_low = 0.0;  // 2.5th percentile
  double ci_high = 0.0; // 97.5th percentile
  std::int64_t battles = 0;
  int rank = 0;         // 1 = highest median
};

struct BootstrapOptions {
  int rounds = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // When false every round refits the full sample (a degenerate bootstrap).
  bool resample = true;
  BradleyTerryOptions fit;
};

struct BootstrapResult {
  std::vector<EloSummary> leaderboard;  // sorted by rank
  int rounds_used = 0;
  int rounds_skipped = 0;  // resamples with no finite maximum
};

// Rounds are independent and seeded by (seed, round index), so the result
// does not depend on the thread count.
BootstrapResult bootstrap_elo(std::span<const Battle> battles, const BootstrapOptions& options = {});

// Linear-interpolated percentile of sorted values, q in [0, 100].
double percentile(std::span<const double> sorted, double q);

}  // namespace mmforge
