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

#ifndef BLKP_EXACT_H_
#define BLKP_EXACT_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "blkp/instance.h"
#include "blkp/knapsack.h"

namespace blkp {

struct ExactLimits {
  int64_t max_nodes = 0;       // 0 = unlimited
  double time_budget_s = 0.0;  // 0 = unlimited
  // Number of best distinct leader vectors retained. Nodes that cannot beat
  // the worst retained entry are pruned, so the pool holds the exact top
  // pool_size solutions whenever the search completes.
  int pool_size = 11;
};

struct PoolEntry {
  BinaryVector x;
  BinaryVector y;
  int64_t leader_value = 0;
};

struct ExactResult {
  BinaryVector opt_x;
  BinaryVector opt_y;
  int64_t opt_value = 0;
  std::vector<PoolEntry> pool;  // descending leader_value, distinct x
  int64_t node_count = 0;
  double elapsed_s = 0.0;
  bool proven_optimal = false;
  std::vector<int64_t> incumbent_trace;  // incumbent value at each improvement
};

// Depth-first branch-and-bound over the leader variables (decreasing
// d1/a1 order, x_i = 1 branch first). Leaves are scored with a per-capacity
// follower response table. Two bounds prune a node; the smaller is used:
//   * the high-point relaxation: fractional knapsack over the free leader
//     items and all follower items, both at leader profit;
//   * fractional knapsack over the free leader items plus the best
//     follower contribution d2.y attainable at any residual <= current one.
ExactResult SolveExact(const BlkpInstance& inst, Mode mode,
                       const ExactLimits& limits = {});

// High-point relaxation bound at the root (floor of the fractional value).
int64_t HighPointBound(const BlkpInstance& inst);

struct Label {
  BinaryVector x;
  int64_t leader_value = 0;
};

// The optimal x followed by up to k further pool entries, in pool order.
std::vector<Label> CollectLabels(const ExactResult& result, int k = 10);

// Exact results persist as one JSON object per file with the instance id,
// mode, optimum, statistics and the full pool.
struct ExactRecord {
  std::string id;
  Mode mode = Mode::kOptimistic;
  ExactResult result;
};

void WriteExactRecord(const ExactRecord& record, std::ostream& out);
ExactRecord ReadExactRecord(std::istream& in);

}  // namespace blkp

#endif  // BLKP_EXACT_H_
