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

#ifndef BLKP_KNAPSACK_H_
#define BLKP_KNAPSACK_H_

#include <cstdint>
#include <span>
#include <vector>

#include "blkp/instance.h"

namespace blkp {

// Binary decision vectors use one byte per variable (0 or 1).
using BinaryVector = std::vector<uint8_t>;

struct KnapsackSolution {
  int64_t value = 0;
  BinaryVector selection;
};

// Exact 0/1 knapsack by a capacity-indexed DP. Among optimal selections the
// backtrack prefers leaving an item out, so results are deterministic.
// Throws kOverflowRisk when the profit sum does not fit in int64.
KnapsackSolution KnapsackMax(std::span<const int64_t> profits,
                             std::span<const int64_t> weights,
                             int64_t capacity);

// Optimal value for every capacity 0..capacity (entry r = best value with
// total weight <= r).
std::vector<int64_t> KnapsackValueProfile(std::span<const int64_t> profits,
                                          std::span<const int64_t> weights,
                                          int64_t capacity);

enum class Mode { kOptimistic, kPessimistic };

const char* ModeName(Mode mode);
Mode ParseMode(const std::string& name);

// Follower profits that encode "maximize c.y, then break ties on d2.y" as a
// single knapsack objective: scale * c_j + d2_j (optimistic) or
// scale * c_j - d2_j (pessimistic), with scale = 1 + sum(d2). Since
// 0 <= d2.y < scale, the follower part dominates lexicographically.
struct LexicographicProfits {
  std::vector<int64_t> profits;
  int64_t scale = 1;
};

LexicographicProfits MakeFollowerProfits(const BlkpInstance& inst, Mode mode);

struct FollowerResponse {
  BinaryVector y;
  int64_t z_star = 0;        // c.y
  int64_t leader_value = 0;  // d1.x + d2.y
  Mode mode = Mode::kOptimistic;
  int64_t residual_capacity = 0;  // b - a1.x
};

// Follower best response to a fixed leader decision: an optimal solution of
// the follower's knapsack, tie-broken on the leader's profit per mode.
// Throws kInfeasibleLeader when a1.x > b.
FollowerResponse FollowerRespond(const BlkpInstance& inst,
                                 std::span<const uint8_t> x_bar, Mode mode);

// Follower response values (not selections) for every residual capacity.
struct ResponseTable {
  std::vector<int64_t> z_star;    // indexed by residual capacity
  std::vector<int64_t> d2_value;  // d2.y of the mode-consistent response
};

ResponseTable BuildResponseTable(const BlkpInstance& inst, Mode mode);

struct BilevelVerdict {
  bool feasible = false;    // shared capacity holds and y is follower-optimal
  bool consistent = false;  // feasible and d2.y matches the mode's tie-break
  int64_t leader_obj = 0;
  int64_t follower_obj = 0;
};

BilevelVerdict EvaluateBilevel(const BlkpInstance& inst,
                               std::span<const uint8_t> x,
                               std::span<const uint8_t> y, Mode mode);

int64_t Dot(std::span<const int64_t> coeffs, std::span<const uint8_t> bits);

}  // namespace blkp

#endif  // BLKP_KNAPSACK_H_
