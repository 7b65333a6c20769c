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

#include "mmforge/bit_cost.hpp"

#include <zlib.h>

#include "mmforge/error.hpp"

namespace mmforge {

DeflateBitCost::DeflateBitCost(int level) : level_(level) {
  if (level < 0 || level > 9) fail(ErrorCode::InvalidArgument, "deflate level must be in [0, 9]");
}

double DeflateBitCost::bits(std::span<const RawFrame> frames) const {
  if (frames.empty()) fail(ErrorCode::InvalidArgument, "no frames");
  const int w = frames.front().width, h = frames.front().height;
  if (w <= 0 || h <= 0) fail(ErrorCode::NonPositive, "frame size must be positive");
  const std::size_t area = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);

  std::vector<std::uint8_t> stream;
  stream.reserve(area * frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& frame = frames[f];
    if (frame.width != w || frame.height != h || frame.pixels.size() != area)
      fail(ErrorCode::InvalidArgument, "frames must share one size");
    for (std::size_t i = 0; i < area; ++i)
      stream.push_back(f == 0 ? frame.pixels[i] : static_cast<std::uint8_t>(frame.pixels[i] - frames[f - 1].pixels[i]));
  }

  uLongf size = compressBound(static_cast<uLong>(stream.size()));
  std::vector<Bytef> out(size);
  if (compress2(out.data(), &size, stream.data(), static_cast<uLong>(stream.size()), level_) != Z_OK)
    fail(ErrorCode::InvalidArgument, "deflate failed");
  return 8.0 * static_cast<double>(size);
}

}  // namespace mmforge
