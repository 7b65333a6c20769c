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

#include <cmath>
#include <cstdint>

namespace oracle {

// True when w is the double nearest to 4 / sqrt(n), decided in exact
// integer arithmetic: with w = m * 2^e, the half-ulp interval around w
// must contain 4 / sqrt(n). Valid for n up to about 2^20.
inline bool correctly_rounded_quarter(double w, std::int64_t n) {
  int exp = 0;
  const double frac = std::frexp(w, &exp);
  const auto m = static_cast<unsigned __int128>(std::ldexp(frac, 53));
  const int e = exp - 53;
  const int shift = 6 - 2 * e;
  if (shift < 0 || shift >= 126) return false;
  const unsigned __int128 bound = static_cast<unsigned __int128>(1) << shift;
  const auto nn = static_cast<unsigned __int128>(n);
  const unsigned __int128 hi = (2 * m + 1) * (2 * m + 1) * nn;
  // Below a power of two the ulp halves, so the lower gap is a quarter ulp.
  const bool pow2 = m == (static_cast<unsigned __int128>(1) << 52);
  const unsigned __int128 lo = pow2 ? (4 * m - 1) * (4 * m - 1) * nn : (2 * m - 1) * (2 * m - 1) * nn;
  const unsigned __int128 lo_bound = pow2 ? bound << 2 : bound;
  return lo <= lo_bound && bound <= hi;
}

}  // namespace oracle
