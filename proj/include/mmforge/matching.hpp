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

#include <vector>

namespace mmforge {

inline constexpr int kUnmatched = -1;

// Maximum-cardinality bipartite matching by augmenting paths. adjacency[l]
// lists the right vertices reachable from left vertex l. Returns the right
// partner of every left vertex or kUnmatched.
std::vector<int> max_bipartite_matching(int right_count, const std::vector<std::vector<int>>& adjacency);

// Matching over allowed edges that maximizes the number of matched pairs,
// then the total weight. Remaining ties go to the lexicographically smallest
// partner vector in left order, with unmatched ranked after every right
// vertex. Weights within `tolerance` of each other count as equal.
//
// allowed and weight are left_count x right_count.
std::vector<int> canonical_max_matching(const std::vector<std::vector<bool>>& allowed,
                                        const std::vector<std::vector<double>>& weight, int right_count,
                                        double tolerance = 1e-9);

}  // namespace mmforge
