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

#include "mmforge/elo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "mmforge/error.hpp"
#include "mmforge/parallel.hpp"
#include "mmforge/random.hpp"

namespace mmforge {

namespace {

struct Tally {
  std::vector<std::string> models;
  std::vector<double> wins;
  std::vector<std::vector<double>> games;  // symmetric comparison counts
  std::vector<std::vector<double>> beat;   // beat[i][j]: (half-)wins of i over j
  std::vector<std::int64_t> battle_count;
};

Tally tally(std::span<const Battle> battles) {
  if (battles.empty()) fail(ErrorCode::InvalidArgument, "no battles to fit");
  std::map<std::string, int> index;
  for (const auto& b : battles) {
    if (b.model_a == b.model_b) fail(ErrorCode::InvalidArgument, "model '" + b.model_a + "' battles itself");
    index.emplace(b.model_a, 0);
    index.emplace(b.model_b, 0);
  }
  Tally t;
  for (auto& [name, i] : index) {
    i = static_cast<int>(t.models.size());
    t.models.push_back(name);
  }
  const std::size_t n = t.models.size();
  t.wins.assign(n, 0.0);
  t.games.assign(n, std::vector<double>(n, 0.0));
  t.beat.assign(n, std::vector<double>(n, 0.0));
  t.battle_count.assign(n, 0);
  for (const auto& b : battles) {
    const int a = index[b.model_a], c = index[b.model_b];
    t.games[a][c] += 1.0;
    t.games[c][a] += 1.0;
    ++t.battle_count[a];
    ++t.battle_count[c];
    const double credit_a = b.outcome == Outcome::AWins ? 1.0 : b.outcome == Outcome::Tie ? 0.5 : 0.0;
    t.beat[a][c] += credit_a;
    t.beat[c][a] += 1.0 - credit_a;
    t.wins[a] += credit_a;
    t.wins[c] += 1.0 - credit_a;
  }
  return t;
}

// Number of vertices reachable from vertex 0 along edges with weight > 0.
std::size_t reachable(const std::vector<std::vector<double>>& edges, bool reverse) {
  const std::size_t n = edges.size();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      const double w = reverse ? edges[j][i] : edges[i][j];
      if (w > 0.0 && !seen[j]) {
        seen[j] = 1;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count;
}

std::vector<double> fit_tally(const Tally& t, const BradleyTerryOptions& options) {
  const std::size_t n = t.models.size();
  if (reachable(t.games, false) != n) fail(ErrorCode::DisconnectedGraph, "battle graph is not connected");
  if (reachable(t.beat, false) != n || reachable(t.beat, true) != n)
    fail(ErrorCode::DegenerateWins, "some group of models never wins (or never loses) against the rest");

  // Minorize-maximize updates; each step increases the likelihood.
  std::vector<double> s(n, 1.0), next(n, 0.0);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double denom = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && t.games[i][j] > 0.0) denom += t.games[i][j] / (s[i] + s[j]);
      next[i] = t.wins[i] / denom;
    }
    double log_mean = 0.0;
    for (double v : next) log_mean += std::log(v);
    log_mean /= static_cast<double>(n);
    const double scale = std::exp(-log_mean);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] *= scale;
      change = std::max(change, std::abs(next[i] - s[i]) / s[i]);
    }
    std::swap(s, next);
    if (change < options.tolerance) break;
  }
  return s;
}

std::vector<double> ratings_of(const std::vector<double>& strengths) {
  double log_mean = 0.0;
  for (double v : strengths) log_mean += std::log(v);
  log_mean /= static_cast<double>(strengths.size());
  std::vector<double> out;
  out.reserve(strengths.size());
  for (double v : strengths) out.push_back(kEloAnchor + kEloScale / std::numbers::ln10 * (std::log(v) - log_mean));
  return out;
}

}  // namespace

std::map<std::string, double> fit_bradley_terry(std::span<const Battle> battles, const BradleyTerryOptions& options) {
  Tally t = tally(battles);
  std::vector<double> s = fit_tally(t, options);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < s.size(); ++i) out[t.models[i]] = s[i];
  return out;
}

std::map<std::string, double> elo_ratings(const std::map<std::string, double>& strengths) {
  std::vector<double> s;
  for (const auto& [name, v] : strengths) {
    if (!(v > 0.0)) fail(ErrorCode::InvalidArgument, "strengths must be positive");
    s.push_back(v);
  }
  std::vector<double> r = ratings_of(s);
  std::map<std::string, double> out;
  std::size_t i = 0;
  for (const auto& [name, v] : strengths) out[name] = r[i++];
  return out;
}

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(ErrorCode::InvalidArgument, "percentile of an empty sample");
  const double pos = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

BootstrapResult bootstrap_elo(std::span<const Battle> battles, const BootstrapOptions& options) {
  if (options.rounds < 1) fail(ErrorCode::InvalidArgument, "bootstrap needs at least one round");
  const Tally full = tally(battles);
  const std::vector<double> point = ratings_of(fit_tally(full, options.fit));
  const std::size_t models = full.models.size();

  std::vector<std::optional<std::vector<double>>> per_round(static_cast<std::size_t>(options.rounds));
  parallel_for(per_round.size(), options.threads, [&](std::size_t r) {
    if (!options.resample) {
      per_round[r] = point;
      return;
    }
    Rng rng(derive_seed(options.seed, r));
    std::vector<Battle> sample;
    sample.reserve(battles.size());
    for (std::size_t i = 0; i < battles.size(); ++i) sample.push_back(battles[rng.below(battles.size())]);
    Tally t = tally(sample);
    if (t.models.size() != models) return;  // a model dropped out of the resample
    try {
      per_round[r] = ratings_of(fit_tally(t, options.fit));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DisconnectedGraph && e.code() != ErrorCode::DegenerateWins) throw;
    }
  });

  BootstrapResult out;
  std::vector<std::vector<double>> samples(models);
  for (const auto& r : per_round) {
    if (!r) {
      ++out.rounds_skipped;
      continue;
    }
    ++out.rounds_used;
    for (std::size_t i = 0; i < models; ++i) samples[i].push_back((*r)[i]);
  }
  if (out.rounds_used == 0) fail(ErrorCode::DegenerateWins, "no bootstrap round produced finite ratings");

  for (std::size_t i = 0; i < models; ++i) {
    std::sort(samples[i].begin(), samples[i].end());
    EloSummary s;
    s.model = full.models[i];
    s.point = point[i];
    s.median = percentile(samples[i], 50.0);
    s.ci_low = percentile(samples[i], 2.5);
    s.ci_high = percentile(samples[i], 97.5);
    s.battles = full.battle_count[i];
    out.leaderboard.push_back(std::move(s));
  }
  std::stable_sort(out.leaderboard.begin(), out.leaderboard.end(),
                   [](const EloSummary& a, const EloSummary& b) { return a.median > b.median; });
  for (std::size_t i = 0; i < out.leaderboard.size(); ++i) out.leaderboard[i].rank = static_cast<int>(i + 1);
  return out;
}

}  // namespace mmforge
