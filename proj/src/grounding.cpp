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

#include "mmforge/grounding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <tuple>
#include <set>

#include "mmforge/error.hpp"

namespace mmforge {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n";

struct Element {
  BlockKind kind;
  std::string_view coords;
  std::string_view inner;
};

struct Sink {
  bool lenient = false;
  LenientParse* report = nullptr;

  // Records a recoverable violation in lenient mode, throws otherwise.
  void violation(ErrorCode code, const std::string& message) const {
    if (!lenient) fail(code, message);
    ++report->violations;
    report->notes.push_back(std::string(error_name(code)) + ": " + message);
  }
};

std::string_view tag_name(BlockKind kind) { return kind == BlockKind::Points ? "points" : "tracks"; }

// Finds "<points" or "<tracks" followed by whitespace, '>' or '/'.
std::size_t find_open_tag(std::string_view text, std::size_t from, BlockKind* kind) {
  while (from < text.size()) {
    std::size_t pos = text.find('<', from);
    if (pos == std::string_view::npos) return pos;
    for (BlockKind k : {BlockKind::Points, BlockKind::Tracks}) {
      std::string_view name = tag_name(k);
      if (text.substr(pos + 1, name.size()) == name) {
        std::size_t after = pos + 1 + name.size();
        if (after < text.size() &&
            (kWhitespace.find(text[after]) != std::string_view::npos || text[after] == '>' ||
             text[after] == '/')) {
          *kind = k;
          return pos;
        }
      }
    }
    from = pos + 1;
  }
  return std::string_view::npos;
}

Element find_element(std::string_view text) {
  BlockKind kind{};
  std::size_t open = find_open_tag(text, 0, &kind);
  if (open == std::string_view::npos) fail(ErrorCode::MalformedSyntax, "no <points> or <tracks> element");

  std::size_t pos = open + 1 + tag_name(kind).size();
  std::optional<std::string_view> coords;
  // Attribute list: name="value" pairs up to '>'.
  while (true) {
    pos = text.find_first_not_of(kWhitespace, pos);
    if (pos == std::string_view::npos) fail(ErrorCode::MalformedSyntax, "unterminated opening tag");
    if (text[pos] == '>') {
      ++pos;
      break;
    }
    std::size_t eq = text.find('=', pos);
    if (eq == std::string_view::npos) fail(ErrorCode::MalformedSyntax, "attribute without value");
    std::string_view name = text.substr(pos, eq - pos);
    while (!name.empty() && kWhitespace.find(name.back()) != std::string_view::npos) name.remove_suffix(1);
    if (name.empty() || name.find_first_of(" \t\r\n<>/\"'") != std::string_view::npos)
      fail(ErrorCode::MalformedSyntax, "bad attribute name");
    std::size_t quote_pos = text.find_first_not_of(kWhitespace, eq + 1);
    if (quote_pos == std::string_view::npos || (text[quote_pos] != '"' && text[quote_pos] != '\''))
      fail(ErrorCode::MalformedSyntax, "attribute value must be quoted");
    char quote = text[quote_pos];
    std::size_t close_quote = text.find(quote, quote_pos + 1);
    if (close_quote == std::string_view::npos) fail(ErrorCode::MalformedSyntax, "unterminated attribute value");
    if (name == "coords") {
      if (coords) fail(ErrorCode::MalformedSyntax, "duplicate coords attribute");
      coords = text.substr(quote_pos + 1, close_quote - quote_pos - 1);
    }
    pos = close_quote + 1;
  }
  if (!coords) fail(ErrorCode::MalformedSyntax, "missing coords attribute");

  std::string closing = "</" + std::string(tag_name(kind)) + ">";
  std::size_t close = text.find(closing, pos);
  if (close == std::string_view::npos)
    fail(ErrorCode::MalformedSyntax, "missing " + closing);
  std::string_view inner = text.substr(pos, close - pos);

  BlockKind other{};
  if (find_open_tag(inner, 0, &other) != std::string_view::npos)
    fail(ErrorCode::MalformedSyntax, "nested grounding element");
  if (find_open_tag(text, close + closing.size(), &other) != std::string_view::npos)
    fail(ErrorCode::MalformedSyntax, "more than one grounding element");
  return {kind, *coords, inner};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    pos = s.find_first_not_of(kWhitespace, pos);
    if (pos == std::string_view::npos) break;
    std::size_t end = s.find_first_of(kWhitespace, pos);
    out.push_back(s.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end;
  }
  return out;
}

std::optional<std::int64_t> parse_unsigned(std::string_view s) {
  if (s.empty() || s.front() == '-' || s.front() == '+') return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

Locus parse_locus(std::string_view token, const Sink& sink) {
  std::size_t dot = token.find('.');
  if (dot == std::string_view::npos) {
    auto index = parse_unsigned(token);
    if (!index) fail(ErrorCode::MalformedSyntax, "bad locus '" + std::string(token) + "'");
    if (*index < 1) fail(ErrorCode::CoordOutOfRange, "image index must be >= 1");
    return Locus::image(*index);
  }
  auto whole = parse_unsigned(token.substr(0, dot));
  std::string_view frac = token.substr(dot + 1);
  bool digits = !frac.empty() && std::all_of(frac.begin(), frac.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (!whole || !digits) fail(ErrorCode::MalformedSyntax, "bad timestamp '" + std::string(token) + "'");
  if (frac.size() == 1) return Locus::tenths(*whole * 10 + (frac[0] - '0'));

  sink.violation(ErrorCode::MalformedSyntax,
                 "timestamp '" + std::string(token) + "' must have exactly one decimal digit");
  double seconds = 0.0;
  std::from_chars(token.data(), token.data() + token.size(), seconds);
  return Locus::tenths(static_cast<std::int64_t>(std::llround(seconds * 10.0)));
}

int parse_coord(std::string_view token, const Sink& sink) {
  auto value = parse_unsigned(token);
  if (!value) fail(ErrorCode::MalformedSyntax, "bad coordinate '" + std::string(token) + "'");
  if (*value > kCoordMax) {
    sink.violation(ErrorCode::CoordOutOfRange, "coordinate " + std::string(token) + " exceeds 1000");
    return kCoordMax;
  }
  return static_cast<int>(*value);
}

// Canonical order inside a frame: points by (x, y), track points by id.
bool point_less(BlockKind kind, const GroundedPoint& a, const GroundedPoint& b) {
  if (kind == BlockKind::Tracks) return a.object_id < b.object_id;
  return std::tie(a.x, a.y, a.object_id) < std::tie(b.x, b.y, b.object_id);
}

std::string order_name(BlockKind kind) { return kind == BlockKind::Tracks ? "by object id" : "by x, y"; }

GroundingBlock parse_impl(std::string_view text, std::optional<BlockKind> kind_hint, const Sink& sink) {
  Element element = find_element(text);
  if (kind_hint && *kind_hint != element.kind)
    fail(ErrorCode::KindMismatch, "expected <" + std::string(tag_name(*kind_hint)) + "> but found <" +
                                      std::string(tag_name(element.kind)) + ">");

  GroundingBlock block;
  block.kind = element.kind;
  block.inline_text = std::string(element.inner);

  std::string_view coords = element.coords;
  if (coords.find_first_not_of(kWhitespace) == std::string_view::npos) return block;

  for (std::string_view group : split(coords, ';')) {
    std::vector<std::string_view> fields = tokens(group);
    if (fields.empty()) {
      sink.violation(ErrorCode::MalformedSyntax, "empty frame group");
      continue;
    }
    std::size_t values = fields.size() - 1;
    if (values == 0 || values % 3 != 0) {
      sink.violation(ErrorCode::MalformedSyntax,
                     "frame group '" + std::string(group) + "' is not a locus followed by id/x/y triples");
      values -= values % 3;
      if (values == 0) continue;
    }
    GroundedFrame frame{parse_locus(fields[0], sink), {}};
    for (std::size_t i = 1; i < 1 + values; i += 3) {
      auto id = parse_unsigned(fields[i]);
      if (!id) fail(ErrorCode::MalformedSyntax, "bad object id '" + std::string(fields[i]) + "'");
      int x = parse_coord(fields[i + 1], sink);
      int y = parse_coord(fields[i + 2], sink);
      if (*id < 1 || *id > std::numeric_limits<int>::max()) {
        sink.violation(ErrorCode::CoordOutOfRange, "object id must be >= 1");
        continue;
      }
      frame.points.push_back({static_cast<int>(*id), x, y});
    }
    if (!frame.points.empty()) block.frames.push_back(std::move(frame));
  }

  if (!block.frames.empty()) {
    Locus::Kind locus_kind = block.frames.front().locus.kind();
    for (const auto& frame : block.frames)
      if (frame.locus.kind() != locus_kind)
        fail(ErrorCode::MalformedSyntax, "block mixes image indices and timestamps");
  }

  bool monotonic = std::adjacent_find(block.frames.begin(), block.frames.end(), [](const auto& a, const auto& b) {
                     return !(a.locus < b.locus);
                   }) == block.frames.end();
  if (!monotonic) {
    sink.violation(ErrorCode::NonMonotonicLoci, "frame loci are not strictly increasing");
    std::stable_sort(block.frames.begin(), block.frames.end(),
                     [](const auto& a, const auto& b) { return a.locus < b.locus; });
    std::vector<GroundedFrame> merged;
    for (auto& frame : block.frames) {
      if (!merged.empty() && merged.back().locus == frame.locus) {
        auto& dst = merged.back().points;
        dst.insert(dst.end(), frame.points.begin(), frame.points.end());
      } else {
        merged.push_back(std::move(frame));
      }
    }
    block.frames = std::move(merged);
  }

  std::set<int> seen_in_block;
  for (auto& frame : block.frames) {
    std::vector<GroundedPoint> kept;
    std::set<int> seen_in_frame;
    for (const auto& p : frame.points) {
      if (!seen_in_frame.insert(p.object_id).second) {
        sink.violation(ErrorCode::DuplicateObjectInFrame,
                       "object " + std::to_string(p.object_id) + " repeated at " + frame.locus.to_string());
        continue;
      }
      if (block.kind == BlockKind::Points && seen_in_block.count(p.object_id)) {
        sink.violation(ErrorCode::DuplicateObjectId,
                       "object " + std::to_string(p.object_id) + " pointed at more than once");
        continue;
      }
      kept.push_back(p);
    }
    for (const auto& p : kept) seen_in_block.insert(p.object_id);
    const auto less = [&](const GroundedPoint& a, const GroundedPoint& b) { return point_less(block.kind, a, b); };
    if (sink.lenient && !std::is_sorted(kept.begin(), kept.end(), less)) {
      sink.violation(ErrorCode::InvariantViolation,
                     "points at " + frame.locus.to_string() + " not sorted " + order_name(block.kind));
    }
    std::sort(kept.begin(), kept.end(), less);
    frame.points = std::move(kept);
  }
  std::erase_if(block.frames, [](const GroundedFrame& f) { return f.points.empty(); });
  return block;
}

}  // namespace

std::string_view to_string(BlockKind kind) noexcept { return tag_name(kind); }

Locus Locus::image(std::int64_t index) {
  if (index < 1) fail(ErrorCode::CoordOutOfRange, "image index must be >= 1");
  return Locus(Kind::ImageIndex, index);
}

Locus Locus::tenths(std::int64_t deciseconds) {
  if (deciseconds < 0) fail(ErrorCode::CoordOutOfRange, "timestamp must be non-negative");
  return Locus(Kind::Timestamp, deciseconds);
}

std::string Locus::to_string() const {
  if (kind_ == Kind::ImageIndex) return std::to_string(value_);
  return std::to_string(value_ / 10) + "." + std::to_string(value_ % 10);
}

GroundingBlock parse_grounding(std::string_view text, std::optional<BlockKind> kind_hint) {
  return parse_impl(text, kind_hint, Sink{});
}

LenientParse parse_grounding_lenient(std::string_view text, std::optional<BlockKind> kind_hint) {
  LenientParse result;
  result.block = parse_impl(text, kind_hint, Sink{true, &result});
  return result;
}

void validate(const GroundingBlock& block) {
  auto broken = [](const std::string& what) { fail(ErrorCode::InvariantViolation, what); };
  std::set<int> seen_in_block;
  for (std::size_t f = 0; f < block.frames.size(); ++f) {
    const auto& frame = block.frames[f];
    if (frame.locus.kind() != block.frames.front().locus.kind()) broken("block mixes image indices and timestamps");
    if (f > 0 && !(block.frames[f - 1].locus < frame.locus)) broken("frame loci are not strictly increasing");
    if (frame.points.empty()) broken("frame " + frame.locus.to_string() + " has no points");
    if (!std::is_sorted(frame.points.begin(), frame.points.end(),
                        [&](const GroundedPoint& a, const GroundedPoint& b) { return point_less(block.kind, a, b); }))
      broken("points at " + frame.locus.to_string() + " not sorted " + order_name(block.kind));
    std::set<int> seen_in_frame;
    for (const auto& p : frame.points) {
      if (p.object_id < 1) broken("object id must be >= 1");
      if (p.x < 0 || p.x > kCoordMax || p.y < 0 || p.y > kCoordMax) broken("coordinate outside [0, 1000]");
      if (!seen_in_frame.insert(p.object_id).second) broken("object id repeated within a frame");
      if (block.kind == BlockKind::Points && !seen_in_block.insert(p.object_id).second)
        broken("object id repeated in a points block");
    }
  }
  BlockKind dummy{};
  if (find_open_tag(block.inline_text, 0, &dummy) != std::string::npos ||
      block.inline_text.find("</points>") != std::string::npos ||
      block.inline_text.find("</tracks>") != std::string::npos)
    broken("inline text contains grounding markup");
}

std::string serialize_coords(const GroundingBlock& block) {
  validate(block);
  std::string out;
  for (std::size_t f = 0; f < block.frames.size(); ++f) {
    if (f > 0) out += ';';
    out += block.frames[f].locus.to_string();
    for (const auto& p : block.frames[f].points) {
      out += ' ';
      out += std::to_string(p.object_id);
      out += ' ';
      out += std::to_string(p.x);
      out += ' ';
      out += std::to_string(p.y);
    }
  }
  return out;
}

std::string serialize(const GroundingBlock& block) {
  std::string name(tag_name(block.kind));
  return "<" + name + " coords=\"" + serialize_coords(block) + "\">" + block.inline_text + "</" + name + ">";
}

int count(const GroundingBlock& block) {
  int best = 0;
  for (const auto& frame : block.frames)
    for (const auto& p : frame.points) best = std::max(best, p.object_id);
  return best;
}

std::size_t point_count(const GroundingBlock& block) {
  std::size_t n = 0;
  for (const auto& frame : block.frames) n += frame.points.size();
  return n;
}

bool is_video(const GroundingBlock& block) noexcept {
  return std::all_of(block.frames.begin(), block.frames.end(),
                     [](const GroundedFrame& f) { return f.locus.is_timestamp(); });
}

NormalizedPoint normalize_point(double px, double py, double width, double height) {
  if (!(width > 0.0) || !(height > 0.0)) fail(ErrorCode::InvalidArgument, "image size must be positive");
  if (!(px >= 0.0 && px <= width && py >= 0.0 && py <= height))
    fail(ErrorCode::OutOfImage, "pixel lies outside the image");
  auto scale = [](double v, double extent) {
    long long r = std::llround(1000.0 * v / extent);
    return static_cast<int>(std::clamp<long long>(r, 0, kCoordMax));
  };
  return {scale(px, width), scale(py, height)};
}

PixelPoint denormalize_point(int x, int y, double width, double height) {
  return {static_cast<double>(x) * width / 1000.0, static_cast<double>(y) * height / 1000.0};
}

FrameAlignment align_to_frames(const GroundingBlock& block, double grid_fps, double tolerance_s) {
  if (!(grid_fps > 0.0)) fail(ErrorCode::InvalidArgument, "grid fps must be positive");
  if (!is_video(block)) fail(ErrorCode::KindMismatch, "frame alignment needs timestamp loci");
  FrameAlignment out;
  out.grid_fps = grid_fps;
  for (const auto& frame : block.frames) {
    double t = frame.locus.seconds();
    auto tick = static_cast<std::int64_t>(std::floor(t * grid_fps + 0.5));
    // Halfway cases snap to the earlier tick.
    if (tick > 0 && std::abs(static_cast<double>(tick - 1) / grid_fps - t) <=
                        std::abs(static_cast<double>(tick) / grid_fps - t))
      --tick;
    double distance = std::abs(out.slot_seconds(tick) - t);
    if (distance <= tolerance_s + 1e-9) {
      auto& slot = out.slots[tick];
      slot.insert(slot.end(), frame.points.begin(), frame.points.end());
    } else {
      out.unaligned.push_back(frame.locus);
    }
  }
  return out;
}

}  // namespace mmforge
