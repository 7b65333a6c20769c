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

#include "mmforge/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmforge {

namespace {

bool augment(int left, const std::vector<std::vector<int>>& adjacency, std::vector<int>& right_owner,
             std::vector<int>& left_partner, std::vector<char>& seen) {
  for (int r : adjacency[left]) {
    if (seen[r]) continue;
    seen[r] = 1;
    if (right_owner[r] == kUnmatched || augment(right_owner[r], adjacency, right_owner, left_partner, seen)) {
      right_owner[r] = left;
      left_partner[left] = r;
      return true;
    }
  }
  return false;
}

// Min-cost perfect assignment on a square matrix (potentials method).
// Returns row -> column and leaves the dual potentials in u, v.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost, std::vector<double>& u, std::vector<double>& v) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  u.assign(n + 1, 0.0);
  v.assign(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, 0);
  for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

std::vector<int> max_bipartite_matching(int right_count, const std::vector<std::vector<int>>& adjacency) {
  std::vector<int> right_owner(static_cast<std::size_t>(right_count), kUnmatched);
  std::vector<int> left_partner(adjacency.size(), kUnmatched);
  for (int l = 0; l < static_cast<int>(adjacency.size()); ++l) {
    std::vector<char> seen(static_cast<std::size_t>(right_count), 0);
    augment(l, adjacency, right_owner, left_partner, seen);
  }
  return left_partner;
}

std::vector<int> canonical_max_matching(const std::vector<std::vector<bool>>& allowed,
                                        const std::vector<std::vector<double>>& weight, int right_count,
                                        double tolerance) {
  const int left_count = static_cast<int>(allowed.size());
  if (left_count == 0 || right_count == 0) return std::vector<int>(static_cast<std::size_t>(left_count), kUnmatched);

  // Square problem: real rows/cols first, then dummies so every vertex can
  // stay unmatched. A matched real edge is worth pair_bonus + weight, and the
  // bonus exceeds any achievable weight total, so cardinality comes first.
  const int n = left_count + right_count;
  double pair_bonus = 1.0;
  for (int l = 0; l < left_count; ++l) {
    double best = 0.0;
    for (int r = 0; r < right_count; ++r)
      if (allowed[l][r]) best = std::max(best, std::abs(weight[l][r]));
    pair_bonus += best;
  }
  const double forbidden = 4.0 * pair_bonus * (n + 1);
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<char>> usable(n, std::vector<char>(n, 1));
  for (int l = 0; l < left_count; ++l) {
    for (int r = 0; r < right_count; ++r) {
      if (allowed[l][r]) {
        cost[l][r] = -(pair_bonus + weight[l][r]);
      } else {
        cost[l][r] = forbidden;
        usable[l][r] = 0;
      }
    }
  }

  std::vector<double> u, v;
  std::vector<int> row_to_col = hungarian(cost, u, v);
  std::vector<int> col_to_row(n);
  for (int i = 0; i < n; ++i) col_to_row[row_to_col[i]] = i;

  const double tol = tolerance * std::max(1.0, pair_bonus);
  auto tight = [&](int i, int j) { return usable[i][j] && std::abs(cost[i][j] - u[i + 1] - v[j + 1]) <= tol; };

  // Every optimal assignment lives on the tight edges. Walk rows in order
  // and move each onto the smallest column that still admits a perfect
  // assignment of the tight subgraph consistent with the rows fixed so far.
  std::vector<char> fixed(n, 0);
  auto reroute = [&](int row, int want) {
    const int owner = col_to_row[want];
    if (fixed[owner]) return false;
    const int goal = row_to_col[row];
    // Alternating path: owner -> c1, col_to_row[c1] -> c2, ..., -> goal.
    std::vector<int> parent_col(n, -2);
    std::vector<char> seen_row(n, 0);
    std::vector<int> queue{owner};
    seen_row[owner] = 1;
    seen_row[row] = 1;
    std::vector<int> came_from_row(n, -1);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int cur = queue[head];
      for (int c = 0; c < n; ++c) {
        if (c == want || parent_col[c] != -2 || !tight(cur, c)) continue;
        parent_col[c] = cur;
        if (c == goal) {
          // Flip along the path back to owner.
          int col = c;
          while (true) {
            const int r = parent_col[col];
            const int prev = row_to_col[r];
            row_to_col[r] = col;
            col_to_row[col] = r;
            if (r == owner) break;
            col = prev;
          }
          row_to_col[row] = want;
          col_to_row[want] = row;
          return true;
        }
        const int next = col_to_row[c];
        if (fixed[next] || seen_row[next]) continue;
        seen_row[next] = 1;
        queue.push_back(next);
      }
    }
    return false;
  };

  for (int l = 0; l < left_count; ++l) {
    for (int r = 0; r < right_count; ++r) {
      if (row_to_col[l] == r) break;
      if (tight(l, r) && reroute(l, r)) break;
    }
    fixed[l] = 1;
  }

  std::vector<int> out(static_cast<std::size_t>(left_count), kUnmatched);
  for (int l = 0; l < left_count; ++l)
    if (row_to_col[l] < right_count) out[l] = row_to_col[l];
  return out;
}

}  // namespace mmforge
