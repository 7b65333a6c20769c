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

// Compressed-size estimates for informativeness scoring.

#include <cstdint>
#include <span>
#include <vector>

namespace mmforge {

// One 8-bit grayscale frame, row-major.
struct RawFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

class BitCostProvider {
 public:
  virtual ~BitCostProvider() = default;
  // Bits needed to encode the frame sequence (sampled at 1 fps).
  virtual double bits(std::span<const RawFrame> frames) const = 0;
};

// Deflate over the first frame followed by successive frame differences.
// Static content compresses to near nothing; motion and texture do not.
class DeflateBitCost final : public BitCostProvider {
 public:
  explicit DeflateBitCost(int level = 6);
  double bits(std::span<const RawFrame> frames) const override;

 private:
  int level_;
};

}  // namespace mmforge
