// Copyright 2026 The BLKP Authors
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

#include "blkp/knapsack.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "blkp/error.h"

namespace blkp {

namespace {

constexpr int64_t kInt64Max = std::numeric_limits<int64_t>::max();

void CheckKnapsackInput(std::span<const int64_t> profits,
                        std::span<const int64_t> weights, int64_t capacity) {
  if (profits.size() != weights.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "profits and weights differ in length");
  }
  if (capacity < 0) {
    throw Error(ErrorCode::kInvalidConfig, "negative knapsack capacity");
  }
  int64_t total = 0;
  for (size_t k = 0; k < profits.size(); ++k) {
    if (profits[k] < 0) {
      throw Error(ErrorCode::kInvalidConfig, "negative knapsack profit");
    }
    if (weights[k] < 1) {
      throw Error(ErrorCode::kNonPositive, "knapsack weight must be >= 1");
    }
    if (profits[k] > kInt64Max - total) {
      throw Error(ErrorCode::kOverflowRisk,
                  "sum of knapsack profits exceeds int64");
    }
    total += profits[k];
  }
}

// Capacities above the total weight behave like the total weight; clamping
// keeps the table size bounded by the data.
int64_t EffectiveCapacity(std::span<const int64_t> weights, int64_t capacity) {
  int64_t total = 0;
  for (int64_t w : weights) {
    total += w;
    if (total >= capacity) return capacity;
  }
  return std::min(total, capacity);
}

}  // namespace

KnapsackSolution KnapsackMax(std::span<const int64_t> profits,
                             std::span<const int64_t> weights,
                             int64_t capacity) {
  CheckKnapsackInput(profits, weights, capacity);
  const size_t n = profits.size();
  const int64_t cap = EffectiveCapacity(weights, capacity);
  const size_t width = static_cast<size_t>(cap) + 1;

  std::vector<int64_t> best(width, 0);
  std::vector<uint8_t> take(n * width, 0);
  for (size_t k = 0; k < n; ++k) {
    const int64_t w = weights[k];
    uint8_t* row = take.data() + k * width;
    for (int64_t r = cap; r >= w; --r) {
      const int64_t candidate = best[r - w] + profits[k];
      if (candidate > best[r]) {
        best[r] = candidate;
        row[r] = 1;
      }
    }
  }

  KnapsackSolution solution;
  solution.value = best[cap];
  solution.selection.assign(n, 0);
  int64_t r = cap;
  for (size_t k = n; k-- > 0;) {
    if (take[k * width + r]) {
      solution.selection[k] = 1;
      r -= weights[k];
    }
  }
  return solution;
}

std::vector<int64_t> KnapsackValueProfile(std::span<const int64_t> profits,
                                          std::span<const int64_t> weights,
                                          int64_t capacity) {
  CheckKnapsackInput(profits, weights, capacity);
  std::vector<int64_t> best(static_cast<size_t>(capacity) + 1, 0);
  for (size_t k = 0; k < profits.size(); ++k) {
    for (int64_t r = capacity; r >= weights[k]; --r) {
      best[r] = std::max(best[r], best[r - weights[k]] + profits[k]);
    }
  }
  return best;
}

const char* ModeName(Mode mode) {
  return mode == Mode::kOptimistic ? "optimistic" : "pessimistic";
}

Mode ParseMode(const std::string& name) {
  if (name == "optimistic" || name == "opt") return Mode::kOptimistic;
  if (name == "pessimistic" || name == "pes") return Mode::kPessimistic;
  throw Error(ErrorCode::kInvalidConfig, "unknown mode '" + name + "'");
}

int64_t Dot(std::span<const int64_t> coeffs, std::span<const uint8_t> bits) {
  int64_t sum = 0;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (bits[k]) sum += coeffs[k];
  }
  return sum;
}

LexicographicProfits MakeFollowerProfits(const BlkpInstance& inst, Mode mode) {
  LexicographicProfits out;
  const int64_t d2_sum =
      std::accumulate(inst.d2.begin(), inst.d2.end(), int64_t{0});
  const int64_t c_sum = std::accumulate(inst.c.begin(), inst.c.end(), int64_t{0});
  out.scale = 1 + d2_sum;
  if (c_sum > (kInt64Max - d2_sum) / out.scale) {
    throw Error(ErrorCode::kOverflowRisk,
                "scale * sum(c) + sum(d2) exceeds int64");
  }
  out.profits.resize(inst.c.size());
  for (size_t j = 0; j < inst.c.size(); ++j) {
    out.profits[j] = mode == Mode::kOptimistic
                         ? out.scale * inst.c[j] + inst.d2[j]
                         : out.scale * inst.c[j] - inst.d2[j];
  }
  return out;
}

FollowerResponse FollowerRespond(const BlkpInstance& inst,
                                 std::span<const uint8_t> x_bar, Mode mode) {
  if (static_cast<int>(x_bar.size()) != inst.n1()) {
    throw Error(ErrorCode::kShapeMismatch,
                "leader vector has length " + std::to_string(x_bar.size()) +
                    ", expected " + std::to_string(inst.n1()));
  }
  const int64_t leader_weight = Dot(inst.a1, x_bar);
  if (leader_weight > inst.b) {
    throw Error(ErrorCode::kInfeasibleLeader,
                "leader weight " + std::to_string(leader_weight) +
                    " exceeds capacity " + std::to_string(inst.b));
  }
  const LexicographicProfits lex = MakeFollowerProfits(inst, mode);

  FollowerResponse response;
  response.mode = mode;
  response.residual_capacity = inst.b - leader_weight;
  response.y = KnapsackMax(lex.profits, inst.a2, response.residual_capacity)
                   .selection;
  // Objectives come from the selection itself, not from decoding the
  // combined DP value.
  response.z_star = Dot(inst.c, response.y);
  response.leader_value = Dot(inst.d1, x_bar) + Dot(inst.d2, response.y);
  return response;
}

ResponseTable BuildResponseTable(const BlkpInstance& inst, Mode mode) {
  const LexicographicProfits lex = MakeFollowerProfits(inst, mode);
  const std::vector<int64_t> profile =
      KnapsackValueProfile(lex.profits, inst.a2, inst.b);
  ResponseTable table;
  table.z_star.resize(profile.size());
  table.d2_value.resize(profile.size());
  for (size_t r = 0; r < profile.size(); ++r) {
    const int64_t v = profile[r];
    if (mode == Mode::kOptimistic) {
      table.z_star[r] = v / lex.scale;
      table.d2_value[r] = v % lex.scale;
    } else {
      // v = scale * z - s with 0 <= s < scale.
      const int64_t z = (v + lex.scale - 1) / lex.scale;
      table.z_star[r] = z;
      table.d2_value[r] = z * lex.scale - v;
    }
  }
  return table;
}

BilevelVerdict EvaluateBilevel(const BlkpInstance& inst,
                               std::span<const uint8_t> x,
                               std::span<const uint8_t> y, Mode mode) {
  BilevelVerdict verdict;
  if (static_cast<int>(x.size()) != inst.n1() ||
      static_cast<int>(y.size()) != inst.n2()) {
    throw Error(ErrorCode::kShapeMismatch,
                "decision vectors do not match instance dimensions");
  }
  verdict.leader_obj = Dot(inst.d1, x) + Dot(inst.d2, y);
  verdict.follower_obj = Dot(inst.c, y);
  const int64_t weight = Dot(inst.a1, x) + Dot(inst.a2, y);
  if (weight > inst.b) return verdict;

  const FollowerResponse best = FollowerRespond(inst, x, mode);
  verdict.feasible = verdict.follower_obj == best.z_star;
  verdict.consistent =
      verdict.feasible && verdict.leader_obj == best.leader_value;
  return verdict;
}

}  // namespace blkp
