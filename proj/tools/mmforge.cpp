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

// mmforge command-line tool. Machine-readable output goes to --out (stdout
// by default); summaries and warnings go to stderr.
//
// Exit status: 0 success, 1 usage error, 2 input-format error, 3 metric or
// solver failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mmforge/data_filters.hpp"
#include "mmforge/elo.hpp"
#include "mmforge/error.hpp"
#include "mmforge/grounding.hpp"
#include "mmforge/loss_weighting.hpp"
#include "mmforge/message_tree.hpp"
#include "mmforge/metrics.hpp"
#include "mmforge/packer.hpp"

namespace {

using nlohmann::json;
using namespace mmforge;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

// Input problem tied to a file line.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::DisconnectedGraph:
    case ErrorCode::DegenerateWins:
    case ErrorCode::AllZero:
    case ErrorCode::TooFew:
    case ErrorCode::EmptyEval:
      return kExitSolver;
    default:
      return kExitInput;
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

class Output {
 public:
  explicit Output(const std::string& path, bool binary = false) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!*file_) throw InputError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Calls fn(record, line_number) for every non-blank JSONL line.
template <typename Fn>
void for_each_record(const std::string& path, Fn&& fn) {
  auto in = open_in(path);
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line), number);
    } catch (const json::exception& e) {
      throw InputError(path + ":" + std::to_string(number) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(number) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(number) + ": " + e.message());
    }
  }
}

std::int64_t require_int(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) throw InputError(std::string("missing integer field '") + key + "'");
  return j.at(key).get<std::int64_t>();
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw InputError(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) throw InputError(std::string("missing string field '") + key + "'");
  return j.at(key).get<std::string>();
}

unsigned default_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("MMFORGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && v > 0) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

json report(const std::string& command, json config) {
  return {{"tool", {{"name", "mmforge"}, {"version", MMFORGE_VERSION}}}, {"command", command}, {"config", std::move(config)}};
}

json prf_json(const Prf& p) { return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}}; }

json counts_json(const DetectionCounts& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}}; }

// ---------------------------------------------------------------- pack

struct PackArgs {
  std::string manifest;
  std::string out = "-";
  std::string report_path;
  PackBudget budget;
};

int run_pack(const PackArgs& a) {
  a.budget.validate();
  auto in = open_in(a.manifest);
  std::size_t line_number = 0;
  PackStream stream(
      [&]() -> std::optional<PackCandidate> {
        std::string line;
        while (std::getline(in, line)) {
          ++line_number;
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          const std::string where = a.manifest + ":" + std::to_string(line_number) + ": ";
          try {
            const json j = json::parse(line);
            PackCandidate c;
            c.id = require_string(j, "id");
            c.text_tokens = require_int(j, "text_tokens");
            c.crops = require_int(j, "crops");
            if (c.text_tokens < 1) throw InputError("text_tokens must be positive");
            if (c.crops < 0) throw InputError("crops must be non-negative");
            return c;
          } catch (const json::exception& e) {
            throw InputError(where + e.what());
          } catch (const InputError& e) {
            throw InputError(where + e.what());
          }
        }
        return std::nullopt;
      },
      a.budget);

  Output out(a.out);
  std::int64_t sequences = 0, examples = 0, tokens = 0, crops = 0;
  while (auto seq = stream.next()) {
    json j = {{"ids", seq->ids},
              {"tokens", seq->tokens},
              {"quantized", seq->quantized_tokens},
              {"crops", seq->crops},
              {"objective", seq->objective}};
    out.stream() << j.dump() << '\n';
    ++sequences;
    examples += static_cast<std::int64_t>(seq->ids.size());
    tokens += seq->tokens;
    crops += seq->crops;
  }
  out.stream().flush();

  const auto per_seq = [&](std::int64_t v, std::int64_t cap) {
    return sequences == 0 ? 0.0 : static_cast<double>(v) / static_cast<double>(sequences * cap);
  };
  const double mean_examples = sequences == 0 ? 0.0 : static_cast<double>(examples) / static_cast<double>(sequences);
  json summary = {{"sequences", sequences},
                  {"examples", examples},
                  {"mean_examples_per_sequence", mean_examples},
                  {"token_utilization", per_seq(tokens, a.budget.max_tokens)},
                  {"crop_utilization", per_seq(crops, a.budget.max_crops)}};
  std::cerr << "packed " << examples << " examples into " << sequences << " sequences; mean "
            << mean_examples << " examples/sequence, token utilization " << per_seq(tokens, a.budget.max_tokens)
            << ", crop utilization " << per_seq(crops, a.budget.max_crops) << '\n';
  if (!a.report_path.empty()) {
    json r = report("pack", {{"manifest", a.manifest},
                             {"max_tokens", a.budget.max_tokens},
                             {"max_crops", a.budget.max_crops},
                             {"crop_weight", a.budget.crop_weight},
                             {"quantum", a.budget.quantum},
                             {"pool", a.budget.pool_size}});
    r["summary"] = summary;
    Output rep(a.report_path);
    rep.stream() << r.dump(2) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- grounding

json block_json(const GroundingBlock& b) {
  json frames = json::array();
  for (const auto& f : b.frames) {
    json points = json::array();
    for (const auto& p : f.points) points.push_back({p.object_id, p.x, p.y});
    frames.push_back({{"locus", f.locus.to_string()},
                      {"locus_kind", f.locus.is_timestamp() ? "timestamp" : "image"},
                      {"points", std::move(points)}});
  }
  return {{"kind", std::string(to_string(b.kind))},
          {"frames", std::move(frames)},
          {"text", b.inline_text},
          {"canonical", serialize(b)},
          {"count", count(b)}};
}

struct GroundingArgs {
  std::string input;
  std::string out = "-";
  bool lenient = false;
  bool jsonl = false;
};

int run_grounding(const GroundingArgs& a) {
  Output out(a.out);
  std::size_t ok = 0, failed = 0;
  auto handle = [&](const std::string& text) {
    json record;
    try {
      if (a.lenient) {
        auto parsed = parse_grounding_lenient(text);
        record = block_json(parsed.block);
        record["violations"] = parsed.violations;
        record["notes"] = parsed.notes;
      } else {
        record = block_json(parse_grounding(text));
        record["violations"] = 0;
      }
      record["ok"] = true;
      ++ok;
    } catch (const Error& e) {
      record = {{"ok", false}, {"error", std::string(error_name(e.code()))}, {"message", e.message()}};
      ++failed;
    }
    out.stream() << record.dump() << '\n';
  };
  if (a.jsonl) {
    for_each_record(a.input, [&](const json& j, std::size_t) { handle(require_string(j, "answer")); });
  } else {
    auto in = open_in(a.input);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      handle(line);
    }
  }
  out.stream().flush();
  std::cerr << ok << " valid, " << failed << " invalid\n";
  return failed == 0 ? kExitOk : kExitInput;
}

// ---------------------------------------------------------------- eval

struct GtVideo {
  std::vector<GtTrack> tracks;
  std::optional<std::int64_t> count;
};

std::map<std::string, GtVideo> read_gt(const std::string& path) {
  std::map<std::string, GtVideo> out;
  for_each_record(path, [&](const json& j, std::size_t) {
    const std::string video = require_string(j, "video");
    GtVideo v;
    if (j.contains("count")) v.count = require_int(j, "count");
    if (j.contains("objects")) {
      const auto& size = j.at("size");
      if (!size.is_array() || size.size() != 2) throw InputError("'size' must be [H, W]");
      const int h = size.at(0).get<int>(), w = size.at(1).get<int>();
      for (const auto& o : j.at("objects")) {
        GtTrack t;
        t.object_id = static_cast<int>(require_int(o, "id"));
        for (const auto& f : o.at("frames"))
          t.frames.push_back({require_number(f, "t"), RleMask(h, w, f.at("runs").get<std::vector<std::int64_t>>())});
        v.tracks.push_back(std::move(t));
      }
    }
    if (!v.count && !j.contains("objects")) throw InputError("ground truth needs 'objects' or 'count'");
    if (!out.emplace(video, std::move(v)).second) throw InputError("duplicate video '" + video + "'");
  });
  return out;
}

struct Prediction {
  std::string video;
  std::string answer;
};

std::vector<Prediction> read_predictions(const std::string& path) {
  std::vector<Prediction> out;
  for_each_record(path, [&](const json& j, std::size_t) {
    Prediction p{require_string(j, "video"), ""};
    const auto& answer = j.at("answer");
    p.answer = answer.is_string() ? answer.get<std::string>() : answer.dump();
    out.push_back(std::move(p));
  });
  return out;
}

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string verdicts;
  std::string out = "-";
  double fps = 1.0;
  double window = 1.5;
  bool micro = false;
};

// Lenient parse; unrecoverable answers score as an empty block.
GroundingBlock parse_answer(const std::string& text, BlockKind kind, int& violations, bool& unparsable) {
  try {
    auto parsed = parse_grounding_lenient(text, kind);
    violations = parsed.violations;
    unparsable = false;
    if (parsed.block.kind != kind) {
      ++violations;
      return GroundingBlock{kind, {}, parsed.block.inline_text};
    }
    return parsed.block;
  } catch (const Error&) {
    violations = 1;
    unparsable = true;
    return GroundingBlock{kind, {}, ""};
  }
}

json eval_config(const std::string& sub, const EvalArgs& a) {
  json c = {{"task", sub}, {"pred", a.pred}, {"gt", a.gt}};
  if (sub == "points") c["window"] = a.window;
  if (sub == "tracks") c["fps"] = a.fps;
  if (sub == "points" || sub == "tracks") c["aggregation"] = a.micro ? "micro" : "macro";
  if (sub == "caption") c["verdicts"] = a.verdicts.empty() ? json("exact-match") : json(a.verdicts);
  return c;
}

int run_eval_grounded(const std::string& sub, const EvalArgs& a) {
  const bool tracks = sub == "tracks";
  if (!(a.fps > 0.0)) throw InputError("--fps must be positive");
  if (!(a.window >= 0.0)) throw InputError("--window must be non-negative");
  const auto gt = read_gt(a.gt);
  const auto preds = read_predictions(a.pred);

  json examples = json::array();
  std::vector<Prf> per_example;
  DetectionCounts total;
  std::int64_t unmatched = 0, violations = 0, unparsable = 0;
  double hota_sum = 0.0, det_sum = 0.0, ass_sum = 0.0;
  std::map<std::string, bool> seen;
  for (const auto& p : preds) {
    auto it = gt.find(p.video);
    if (it == gt.end() || seen[p.video]) {
      ++unmatched;
      continue;
    }
    seen[p.video] = true;
    int v = 0;
    bool bad = false;
    GroundingBlock block = parse_answer(p.answer, tracks ? BlockKind::Tracks : BlockKind::Points, v, bad);
    violations += v;
    unparsable += bad;
    const auto& tracks_gt = it->second.tracks;
    json e = {{"video", p.video}, {"violations", v}};
    PointScore score;
    if (tracks) {
      const auto frames = track_frames(block, tracks_gt, a.fps);
      score = track_f1(frames);
      const HotaScore h = hota(frames);
      e["hota"] = h.hota;
      e["det_a"] = h.det_a;
      e["ass_a"] = h.ass_a;
      hota_sum += h.hota;
      det_sum += h.det_a;
      ass_sum += h.ass_a;
    } else {
      score = point_f1(block, tracks_gt, a.window);
    }
    e.update(prf_json(score.prf));
    e.update(counts_json(score.counts));
    examples.push_back(std::move(e));
    per_example.push_back(score.prf);
    total += score.counts;
  }
  for (const auto& [video, g] : gt)
    if (!seen.count(video)) ++unmatched;

  const Prf agg = a.micro ? prf_from_counts(total) : macro_average(per_example);
  json r = report("eval " + sub, eval_config(sub, a));
  json aggregate = prf_json(agg);
  aggregate.update(counts_json(total));
  aggregate["examples"] = per_example.size();
  if (tracks) {
    const double n = per_example.empty() ? 1.0 : static_cast<double>(per_example.size());
    aggregate["hota"] = hota_sum / n;
    aggregate["det_a"] = det_sum / n;
    aggregate["ass_a"] = ass_sum / n;
  }
  r["aggregate"] = aggregate;
  r["examples"] = examples;
  r["warnings"] = {{"unmatched_ids", unmatched}, {"violations", violations}, {"unparsable_answers", unparsable}};
  Output out(a.out);
  out.stream() << r.dump() << '\n';
  std::cerr << sub << ": " << per_example.size() << " examples, f1 " << agg.f1;
  if (tracks) std::cerr << ", hota " << aggregate["hota"].get<double>();
  std::cerr << "; " << unmatched << " unmatched ids, " << violations << " format violations\n";
  return kExitOk;
}

// A count answer is either a bare integer or a grounding block.
std::optional<std::int64_t> predicted_count(const std::string& answer, int& violations) {
  violations = 0;
  std::istringstream in(answer);
  std::int64_t n;
  std::string rest;
  if (in >> n && !(in >> rest) && n >= 0) return n;
  try {
    auto parsed = parse_grounding_lenient(answer);
    violations = parsed.violations;
    return count(parsed.block);
  } catch (const Error&) {
    violations = 1;
    return std::nullopt;
  }
}

int run_eval_count(const EvalArgs& a) {
  const auto gt = read_gt(a.gt);
  const auto preds = read_predictions(a.pred);
  json examples = json::array();
  std::int64_t unmatched = 0, violations = 0, close = 0, exact = 0, scored = 0;
  std::map<std::string, bool> seen;
  for (const auto& p : preds) {
    auto it = gt.find(p.video);
    if (it == gt.end() || seen[p.video]) {
      ++unmatched;
      continue;
    }
    seen[p.video] = true;
    std::int64_t truth = it->second.count.value_or(static_cast<std::int64_t>(it->second.tracks.size()));
    int v = 0;
    auto pred = predicted_count(p.answer, v);
    violations += v;
    const bool c = pred && close_accuracy(*pred, truth);
    const bool x = pred && exact_accuracy(*pred, truth);
    close += c;
    exact += x;
    ++scored;
    examples.push_back({{"video", p.video},
                        {"gt", truth},
                        {"pred", pred ? json(*pred) : json(nullptr)},
                        {"close", c ? 1.0 : 0.0},
                        {"exact", x ? 1.0 : 0.0},
                        {"violations", v}});
  }
  for (const auto& [video, g] : gt)
    if (!seen.count(video)) ++unmatched;
  const double n = scored == 0 ? 1.0 : static_cast<double>(scored);
  json r = report("eval count", eval_config("count", a));
  r["aggregate"] = {{"close_accuracy", static_cast<double>(close) / n},
                    {"exact_accuracy", static_cast<double>(exact) / n},
                    {"examples", scored}};
  r["examples"] = examples;
  r["warnings"] = {{"unmatched_ids", unmatched}, {"violations", violations}};
  Output out(a.out);
  out.stream() << r.dump() << '\n';
  std::cerr << "count: " << scored << " examples, close " << static_cast<double>(close) / n << ", exact "
            << static_cast<double>(exact) / n << '\n';
  return kExitOk;
}

std::vector<bool> bool_list(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InputError(std::string("missing list field '") + key + "'");
  return j.at(key).get<std::vector<bool>>();
}

int run_eval_caption(const EvalArgs& a) {
  std::map<std::string, std::vector<std::string>> human;
  for_each_record(a.gt, [&](const json& j, std::size_t) {
    human[require_string(j, "video")] = j.at("statements").get<std::vector<std::string>>();
  });
  std::map<std::string, JudgeVerdicts> verdicts;
  if (!a.verdicts.empty()) {
    for_each_record(a.verdicts, [&](const json& j, std::size_t) {
      verdicts[require_string(j, "video")] = {bool_list(j, "model_supported"), bool_list(j, "human_supported")};
    });
  }
  ExactMatchJudge judge;
  std::vector<CaptionItem> items;
  json examples = json::array();
  std::int64_t unmatched = 0;
  std::map<std::string, bool> seen;
  for_each_record(a.pred, [&](const json& j, std::size_t) {
    const std::string video = require_string(j, "video");
    const auto model = j.at("statements").get<std::vector<std::string>>();
    auto it = human.find(video);
    if (it == human.end() || seen[video]) {
      ++unmatched;
      return;
    }
    seen[video] = true;
    CaptionItem item{model.size(), it->second.size(), {}};
    if (a.verdicts.empty()) {
      item.verdicts = judge_statements(model, it->second, judge);
    } else {
      auto v = verdicts.find(video);
      if (v == verdicts.end()) throw InputError("no verdicts for video '" + video + "'");
      item.verdicts = v->second;
    }
    json e = prf_json(caption_video_scores(item));
    e["video"] = video;
    examples.push_back(std::move(e));
    items.push_back(std::move(item));
  });
  for (const auto& [video, s] : human)
    if (!seen.count(video)) ++unmatched;
  const Prf agg = caption_f1(items);
  json r = report("eval caption", eval_config("caption", a));
  r["aggregate"] = prf_json(agg);
  r["aggregate"]["examples"] = items.size();
  r["examples"] = examples;
  r["warnings"] = {{"unmatched_ids", unmatched}};
  Output out(a.out);
  out.stream() << r.dump() << '\n';
  std::cerr << "caption: " << items.size() << " examples, f1 " << agg.f1 << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- elo

struct EloArgs {
  std::string battles;
  std::string out = "-";
  int rounds = 1000;
  std::uint64_t seed = 0;
  bool no_resample = false;
  unsigned threads = 0;
};

int run_elo(const EloArgs& a) {
  if (a.rounds < 1) throw InputError("--rounds must be positive");
  std::vector<Battle> battles;
  for_each_record(a.battles, [&](const json& j, std::size_t) {
    Battle b{require_string(j, "a"), require_string(j, "b"), Outcome::Tie};
    const std::string o = require_string(j, "outcome");
    if (o == "a")
      b.outcome = Outcome::AWins;
    else if (o == "b")
      b.outcome = Outcome::BWins;
    else if (o != "tie")
      throw InputError("outcome must be \"a\", \"b\" or \"tie\"");
    if (b.model_a == b.model_b) throw InputError("a model cannot battle itself");
    battles.push_back(std::move(b));
  });
  BootstrapOptions opts;
  opts.rounds = a.rounds;
  opts.seed = a.seed;
  opts.resample = !a.no_resample;
  opts.threads = a.threads == 0 ? default_threads() : a.threads;
  const auto result = bootstrap_elo(battles, opts);

  json board = json::array();
  for (const auto& s : result.leaderboard)
    board.push_back({{"rank", s.rank},
                     {"model", s.model},
                     {"rating", s.median},
                     {"point", s.point},
                     {"ci_low", s.ci_low},
                     {"ci_high", s.ci_high},
                     {"battles", s.battles}});
  json r = report("elo", {{"battles", a.battles}, {"rounds", a.rounds}, {"seed", a.seed}, {"resample", opts.resample}});
  r["leaderboard"] = board;
  r["rounds_used"] = result.rounds_used;
  r["rounds_skipped"] = result.rounds_skipped;
  Output out(a.out);
  out.stream() << r.dump() << '\n';
  for (const auto& s : result.leaderboard)
    std::cerr << s.rank << "\t" << s.model << "\t" << s.median << "\t[" << s.ci_low << ", " << s.ci_high << "]\n";
  if (result.rounds_skipped > 0) std::cerr << result.rounds_skipped << " degenerate resamples skipped\n";
  return kExitOk;
}

// ---------------------------------------------------------------- filter

struct FilterArgs {
  std::string manifest;
  std::string pool;
  std::string eval;
  std::string out = "-";
  std::size_t target = 0;
  std::size_t chunk = 1000;
  std::uint64_t seed = 0;
  double threshold = 0.95;
  std::size_t frames = 8;
  int min_s = 10;
  int max_s = 30;
  unsigned threads = 0;
};

VideoStats read_stats(const json& j) {
  VideoStats v;
  v.id = require_string(j, "id");
  v.duration_s = require_number(j, "duration");
  v.width = static_cast<int>(require_int(j, "w"));
  v.height = static_cast<int>(require_int(j, "h"));
  v.bit_cost = require_number(j, "bits");
  if (j.contains("keywords")) v.keywords = j.at("keywords").get<std::vector<std::string>>();
  if (j.contains("segments")) v.segment_count = require_number(j, "segments");
  if (v.segment_count < 0.0) throw InputError("segments must be non-negative");
  return v;
}

int run_informativeness(const FilterArgs& a) {
  std::vector<ScoredVideo> scores;
  for_each_record(a.manifest, [&](const json& j, std::size_t) {
    // Precomputed scores are accepted as {"id", "score"}.
    if (j.contains("score"))
      scores.push_back({require_string(j, "id"), require_number(j, "score")});
    else
      scores.push_back({require_string(j, "id"), informativeness(read_stats(j))});
  });
  const auto f = filter_low_information(scores);
  json r = report("filter informativeness", {{"manifest", a.manifest}, {"sigmas", 1}});
  json scored = json::array();
  for (const auto& s : scores) scored.push_back({{"id", s.id}, {"score", s.score}});
  r["kept"] = f.kept;
  r["removed"] = f.removed;
  r["stats"] = {{"mean", f.mean}, {"sigma", f.sigma}, {"threshold", f.threshold}};
  r["scores"] = scored;
  Output out(a.out);
  out.stream() << r.dump() << '\n';
  std::cerr << "informativeness: mean " << f.mean << ", sigma " << f.sigma << ", threshold " << f.threshold << "; kept "
            << f.kept.size() << ", removed " << f.removed.size() << '\n';
  return kExitOk;
}

int run_diverse(const FilterArgs& a) {
  std::vector<VideoStats> pool;
  for_each_record(a.manifest, [&](const json& j, std::size_t) { pool.push_back(read_stats(j)); });
  const auto s = greedy_diverse_sample(pool, {a.target, a.chunk, a.seed});
  json r = report("filter diverse", {{"manifest", a.manifest}, {"target", a.target}, {"chunk", a.chunk}, {"seed", a.seed}});
  r["kept"] = s.ids;
  std::vector<std::string> removed;
  std::vector<bool> chosen(pool.size(), false);
  for (auto i : s.indices) chosen[i] = true;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (!chosen[i]) removed.push_back(pool[i].id);
  r["removed"] = removed;
  r["stats"] = {{"entropy", s.entropy}};
  Output out(a.out);
  out.stream() << r.dump() << '\n';
  std::cerr << "diverse: selected " << s.ids.size() << " of " << pool.size() << ", final keyword entropy "
            << (s.entropy.empty() ? 0.0 : s.entropy.back()) << " nats\n";
  return kExitOk;
}

std::vector<FrameEmbeddings> read_embeddings(const std::string& path) {
  std::vector<FrameEmbeddings> out;
  for_each_record(path, [&](const json& j, std::size_t) {
    out.push_back({require_string(j, "id"), j.at("frames").get<std::vector<std::vector<float>>>()});
  });
  return out;
}

int run_decontaminate(const FilterArgs& a) {
  const auto pool = read_embeddings(a.pool);
  const auto eval = read_embeddings(a.eval);
  const auto d = decontaminate(pool, eval, {a.threshold, a.frames}, a.threads == 0 ? default_threads() : a.threads);
  json r = report("filter decontaminate",
                  {{"pool", a.pool}, {"eval", a.eval}, {"threshold", a.threshold}, {"frames_per_video", a.frames}});
  r["kept"] = d.kept;
  r["removed"] = d.removed;
  json sims = json::array();
  for (std::size_t i = 0; i < pool.size(); ++i) sims.push_back({{"id", pool[i].id}, {"max_similarity", d.max_similarity[i]}});
  r["stats"] = {{"max_similarity", sims}};
  Output out(a.out);
  out.stream() << r.dump() << '\n';
  std::cerr << "decontaminate: removed " << d.removed.size() << " of " << pool.size() << '\n';
  return kExitOk;
}

int run_split_clips(const FilterArgs& a) {
  json videos = json::array();
  for_each_record(a.manifest, [&](const json& j, std::size_t) {
    const auto density = j.at("density").get<std::vector<double>>();
    const auto s = split_clips(density, {a.min_s, a.max_s});
    json clips = json::array();
    for (auto [b, e] : s.clips) clips.push_back({b, e});
    videos.push_back({{"id", require_string(j, "id")}, {"cuts", s.cuts}, {"clips", clips}, {"max_density", s.max_density}});
  });
  json r = report("filter split-clips", {{"manifest", a.manifest}, {"min_s", a.min_s}, {"max_s", a.max_s}});
  r["videos"] = videos;
  Output out(a.out);
  out.stream() << r.dump() << '\n';
  std::cerr << "split-clips: " << videos.size() << " videos\n";
  return kExitOk;
}

// ---------------------------------------------------------------- mask

struct MaskArgs {
  std::string input;
  std::string out;
};

TokenKind token_kind(const std::string& s) {
  if (s == "visual") return TokenKind::Visual;
  if (s == "text") return TokenKind::Text;
  throw InputError("segment kind must be \"visual\" or \"text\"");
}

Role role(const std::string& s) {
  if (s == "user") return Role::User;
  if (s == "assistant") return Role::Assistant;
  throw InputError("role must be \"user\" or \"assistant\"");
}

// Input: {"examples": [{"prefix": [{"kind", "tokens"}], "branches": [[{"role", "tokens"}]]}]}
int run_mask(const MaskArgs& a) {
  auto in = open_in(a.input);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(a.input + ": " + e.what());
  }
  std::vector<LinearizedExample> examples;
  for (const auto& ex : j.at("examples")) {
    std::vector<PrefixSegment> prefix;
    for (const auto& s : ex.at("prefix")) prefix.push_back({token_kind(require_string(s, "kind")), require_int(s, "tokens")});
    std::vector<Branch> branches;
    for (const auto& b : ex.at("branches")) {
      Branch branch;
      for (const auto& m : b) branch.push_back({role(require_string(m, "role")), require_int(m, "tokens"), 0.0});
      branches.push_back(std::move(branch));
    }
    examples.push_back(linearize(build_tree(std::move(prefix), std::move(branches)), static_cast<int>(examples.size())));
  }
  PackedLayout layout(examples);
  const DenseMask mask = build_mask(layout);
  Output out(a.out, true);
  write_mask(out.stream(), mask);
  out.stream().flush();
  std::cerr << "mask: " << layout.size() << " positions, " << layout.example_count() << " examples\n";
  return kExitOk;
}

struct WeightArgs {
  std::string input;
  std::string out = "-";
  bool tracking_separate = false;
};

const char* kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::VideoCaption: return "video_caption";
    case TaskKind::Pointing: return "pointing";
    case TaskKind::Other: break;
  }
  return "other";
}

// Input records: {"kind": task label, "tokens": answer token count}.
int run_weights(const WeightArgs& a) {
  Output out(a.out);
  const TaskLabelOptions opts{!a.tracking_separate};
  std::size_t n = 0;
  for_each_record(a.input, [&](const json& j, std::size_t) {
    const std::string label = require_string(j, "kind");
    const std::int64_t tokens = require_int(j, "tokens");
    const TaskKind kind = task_kind_from_label(label, opts);
    out.stream() << json{{"kind", label}, {"class", kind_name(kind)}, {"tokens", tokens}, {"weight", token_weight(kind, tokens)}}.dump()
                 << '\n';
    ++n;
  });
  std::cerr << "weights: " << n << " records\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmforge: packing, grounding, metrics and data-curation tools"};
  app.set_version_flag("--version", std::string("mmforge ") + MMFORGE_VERSION);
  app.require_subcommand(1);
  std::function<int()> action;

  PackArgs pack;
  auto* pack_cmd = app.add_subcommand("pack", "Pack a candidate manifest into sequences");
  pack_cmd->add_option("--manifest", pack.manifest, "JSONL of {id, text_tokens, crops}")->required();
  pack_cmd->add_option("--max-tokens", pack.budget.max_tokens, "LLM token budget")->capture_default_str();
  pack_cmd->add_option("--max-crops", pack.budget.max_crops, "Vision crop budget")->capture_default_str();
  pack_cmd->add_option("--crop-weight", pack.budget.crop_weight, "Objective weight per crop")->capture_default_str();
  pack_cmd->add_option("--quantum", pack.budget.quantum, "Token length rounding")->capture_default_str();
  pack_cmd->add_option("--pool", pack.budget.pool_size, "Candidate pool size")->capture_default_str();
  pack_cmd->add_option("--out", pack.out, "Packed JSONL output")->capture_default_str();
  pack_cmd->add_option("--report", pack.report_path, "Write a JSON summary report");
  pack_cmd->callback([&] { action = [&] { return run_pack(pack); }; });

  GroundingArgs grounding;
  auto* g_cmd = app.add_subcommand("grounding", "Validate and canonicalize grounding answers");
  g_cmd->add_option("--input", grounding.input, "One answer per line, or JSONL with --jsonl")->required();
  g_cmd->add_flag("--lenient", grounding.lenient, "Repair answers and count violations");
  g_cmd->add_flag("--jsonl", grounding.jsonl, "Input records are {\"answer\": ...}");
  g_cmd->add_option("--out", grounding.out, "JSONL output")->capture_default_str();
  g_cmd->callback([&] { action = [&] { return run_grounding(grounding); }; });

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
  eval_cmd->require_subcommand(1);
  for (std::string sub : {"points", "tracks", "count", "caption"}) {
    auto* c = eval_cmd->add_subcommand(sub, "Evaluate " + sub);
    c->add_option("--pred", eval.pred, "Predictions JSONL")->required();
    c->add_option("--gt", eval.gt, "Ground-truth JSONL")->required();
    c->add_option("--out", eval.out, "Report output")->capture_default_str();
    if (sub == "points" || sub == "tracks") c->add_flag("--micro", eval.micro, "Aggregate pooled counts");
    if (sub == "points") c->add_option("--window", eval.window, "Time window in seconds")->capture_default_str();
    if (sub == "tracks") c->add_option("--fps", eval.fps, "Evaluation frame rate")->capture_default_str();
    if (sub == "caption") c->add_option("--verdicts", eval.verdicts, "Judge verdicts JSONL (default: exact match)");
    c->callback([&, sub] {
      action = [&, sub] {
        if (sub == "count") return run_eval_count(eval);
        if (sub == "caption") return run_eval_caption(eval);
        return run_eval_grounded(sub, eval);
      };
    });
  }

  EloArgs elo;
  auto* elo_cmd = app.add_subcommand("elo", "Bootstrap Elo leaderboard from pairwise battles");
  elo_cmd->add_option("--battles", elo.battles, "JSONL of {a, b, outcome}")->required();
  elo_cmd->add_option("--rounds", elo.rounds, "Bootstrap rounds")->capture_default_str();
  elo_cmd->add_option("--seed", elo.seed, "Random seed")->capture_default_str();
  elo_cmd->add_flag("--no-resample", elo.no_resample, "Refit the full sample every round");
  elo_cmd->add_option("--threads", elo.threads, "Worker threads (0: automatic)")->capture_default_str();
  elo_cmd->add_option("--out", elo.out, "Report output")->capture_default_str();
  elo_cmd->callback([&] { action = [&] { return run_elo(elo); }; });

  FilterArgs filter;
  auto* filter_cmd = app.add_subcommand("filter", "Data-curation filters");
  filter_cmd->require_subcommand(1);
  auto* info = filter_cmd->add_subcommand("informativeness", "Drop videos below mean - sigma");
  info->add_option("--manifest", filter.manifest, "VideoStats or {id, score} JSONL")->required();
  auto* diverse = filter_cmd->add_subcommand("diverse", "Greedy keyword/segment diversity sample");
  diverse->add_option("--manifest", filter.manifest, "VideoStats JSONL")->required();
  diverse->add_option("--target", filter.target, "Videos to select")->required();
  diverse->add_option("--chunk", filter.chunk, "Chunk size")->capture_default_str();
  diverse->add_option("--seed", filter.seed, "Chunk order seed")->capture_default_str();
  auto* decon = filter_cmd->add_subcommand("decontaminate", "Remove videos similar to evaluation videos");
  decon->add_option("--pool", filter.pool, "Pool embeddings JSONL")->required();
  decon->add_option("--eval", filter.eval, "Evaluation embeddings JSONL")->required();
  decon->add_option("--threshold", filter.threshold, "Similarity threshold (strict)")->capture_default_str();
  decon->add_option("--frames", filter.frames, "Frames per video")->capture_default_str();
  decon->add_option("--threads", filter.threads, "Worker threads (0: automatic)")->capture_default_str();
  auto* split = filter_cmd->add_subcommand("split-clips", "Split videos into clips minimizing peak density");
  split->add_option("--manifest", filter.manifest, "JSONL of {id, density: [per second]}")->required();
  split->add_option("--min", filter.min_s, "Shortest clip, seconds")->capture_default_str();
  split->add_option("--max", filter.max_s, "Longest clip, seconds")->capture_default_str();
  for (auto* c : {info, diverse, decon, split}) c->add_option("--out", filter.out, "Report output")->capture_default_str();
  info->callback([&] { action = [&] { return run_informativeness(filter); }; });
  diverse->callback([&] { action = [&] { return run_diverse(filter); }; });
  decon->callback([&] { action = [&] { return run_decontaminate(filter); }; });
  split->callback([&] { action = [&] { return run_split_clips(filter); }; });

  MaskArgs mask;
  auto* mask_cmd = app.add_subcommand("mask", "Export the attention mask of packed message trees");
  mask_cmd->add_option("--input", mask.input, "JSON packed sequence of message trees")->required();
  mask_cmd->add_option("--out", mask.out, "Binary mask output")->required();
  mask_cmd->callback([&] { action = [&] { return run_mask(mask); }; });

  WeightArgs weights;
  auto* weights_cmd = app.add_subcommand("weights", "Per-token loss weights for answer lengths");
  weights_cmd->add_option("--input", weights.input, "JSONL of {kind, tokens}")->required();
  weights_cmd->add_flag("--tracking-separate", weights.tracking_separate, "Weight tracking labels as other tasks");
  weights_cmd->add_option("--out", weights.out, "JSONL output")->capture_default_str();
  weights_cmd->callback([&] { action = [&] { return run_weights(weights); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
