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

#include "mmforge/packer.hpp"

#include <algorithm>
#include <numeric>

#include "mmforge/error.hpp"

namespace mmforge {

void PackBudget::validate() const {
  if (max_tokens <= 0 || max_crops < 0 || crop_weight < 0 || quantum <= 0 || pool_size == 0)
    fail(ErrorCode::InvalidArgument, "packing budget values must be positive");
  if (max_tokens % quantum != 0) fail(ErrorCode::InvalidArgument, "quantum must divide max_tokens");
}

std::int64_t quantize(std::int64_t tokens, std::int64_t quantum) {
  if (tokens < 1) fail(ErrorCode::InvalidArgument, "token count must be >= 1");
  if (quantum < 1) fail(ErrorCode::InvalidArgument, "quantum must be >= 1");
  return (tokens + quantum - 1) / quantum * quantum;
}

std::int64_t pack_value(const PackCandidate& c, const PackBudget& budget) {
  return c.text_tokens + budget.crop_weight * c.crops;
}

bool fits(const PackCandidate& c, const PackBudget& budget) {
  return c.text_tokens >= 1 && c.crops >= 0 && quantize(c.text_tokens, budget.quantum) <= budget.max_tokens &&
         c.crops <= budget.max_crops;
}

PackedSequence solve(std::span<const PackCandidate> pool, const PackBudget& budget) {
  budget.validate();
  if (pool.empty()) fail(ErrorCode::EmptyPool, "cannot solve an empty pool");
  for (const auto& c : pool)
    if (!fits(c, budget)) fail(ErrorCode::InfeasibleCandidate, "candidate '" + c.id + "' exceeds the budget alone");

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pool[a].arrival_index < pool[b].arrival_index; });

  const std::int64_t token_cap = budget.max_tokens / budget.quantum;
  const std::int64_t crop_cap = budget.max_crops;
  const std::size_t width = static_cast<std::size_t>(crop_cap + 1);
  const std::size_t states = static_cast<std::size_t>(token_cap + 1) * width;
  const std::int64_t count_base = static_cast<std::int64_t>(pool.size()) + 1;
  const std::size_t n = order.size();

  // Suffix DP over items in arrival order: value[s] is the best
  // objective * count_base + count from items i..n-1 with remaining
  // capacity s = (quanta, crops). take[i] marks states where taking item i
  // is part of some optimum, which lets the forward walk prefer early items.
  std::vector<std::int64_t> next(states, 0), cur(states, 0);
  std::vector<std::vector<std::uint64_t>> take(n, std::vector<std::uint64_t>((states + 63) / 64, 0));
  for (std::size_t i = n; i-- > 0;) {
    const PackCandidate& c = pool[order[i]];
    const std::int64_t dq = quantize(c.text_tokens, budget.quantum) / budget.quantum;
    const std::int64_t dc = c.crops;
    const std::int64_t gain = pack_value(c, budget) * count_base + 1;
    for (std::int64_t t = 0; t <= token_cap; ++t) {
      for (std::int64_t k = 0; k <= crop_cap; ++k) {
        const std::size_t s = static_cast<std::size_t>(t) * width + static_cast<std::size_t>(k);
        std::int64_t best = next[s];
        if (t >= dq && k >= dc) {
          const std::size_t rest = static_cast<std::size_t>(t - dq) * width + static_cast<std::size_t>(k - dc);
          const std::int64_t with = gain + next[rest];
          if (with >= best) {
            best = with;
            take[i][s / 64] |= std::uint64_t{1} << (s % 64);
          }
        }
        cur[s] = best;
      }
    }
    std::swap(cur, next);
  }

  PackedSequence out;
  std::int64_t t = token_cap, k = crop_cap;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(t) * width + static_cast<std::size_t>(k);
    if (!((take[i][s / 64] >> (s % 64)) & 1u)) continue;
    const PackCandidate& c = pool[order[i]];
    const std::int64_t q = quantize(c.text_tokens, budget.quantum);
    out.ids.push_back(c.id);
    out.arrival_indices.push_back(c.arrival_index);
    out.tokens += c.text_tokens;
    out.quantized_tokens += q;
    out.crops += c.crops;
    out.objective += pack_value(c, budget);
    t -= q / budget.quantum;
    k -= c.crops;
  }
  return out;
}

PackCandidate truncate(PackCandidate candidate, const PackBudget& budget) {
  budget.validate();
  if (candidate.crops > budget.max_crops)
    fail(ErrorCode::CropOverflow, "candidate '" + candidate.id + "' has " + std::to_string(candidate.crops) +
                                      " crops, budget is " + std::to_string(budget.max_crops));
  if (candidate.text_tokens < 1) fail(ErrorCode::InvalidArgument, "token count must be >= 1");
  if (quantize(candidate.text_tokens, budget.quantum) > budget.max_tokens) {
    candidate.text_tokens = budget.max_tokens;
    candidate.truncated = true;
  }
  return candidate;
}

PackStream::PackStream(Source source, PackBudget budget) : source_(std::move(source)), budget_(budget) {
  budget_.validate();
}

void PackStream::refill() {
  while (!exhausted_ && pool_.size() < budget_.pool_size) {
    std::optional<PackCandidate> c = source_();
    if (!c) {
      exhausted_ = true;
      break;
    }
    if (!fits(*c, budget_))
      fail(ErrorCode::InfeasibleCandidate, "candidate '" + c->id + "' exceeds the budget; truncate it first");
    c->arrival_index = next_arrival_++;
    pool_.push_back(std::move(*c));
  }
}

std::optional<PackedSequence> PackStream::next() {
  refill();
  if (pool_.empty()) return std::nullopt;
  PackedSequence seq = solve(pool_, budget_);
  // Selected arrival indices are sorted, as is the pool.
  std::erase_if(pool_, [&](const PackCandidate& c) {
    return std::binary_search(seq.arrival_indices.begin(), seq.arrival_indices.end(), c.arrival_index);
  });
  return seq;
}

std::vector<PackedSequence> pack_all(std::span<const PackCandidate> candidates, const PackBudget& budget) {
  std::size_t cursor = 0;
  PackStream stream(
      [&]() -> std::optional<PackCandidate> {
        if (cursor == candidates.size()) return std::nullopt;
        return candidates[cursor++];
      },
      budget);
  std::vector<PackedSequence> out;
  while (auto seq = stream.next()) out.push_back(std::move(*seq));
  return out;
}

}  // namespace mmforge
