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

#ifndef BLKP_SEARCH_H_
#define BLKP_SEARCH_H_

#include <cstdint>
#include <span>

#include "blkp/instance.h"
#include "blkp/knapsack.h"
#include "blkp/pna.h"

namespace blkp {

struct SearchConfig {
  // Values <= theta are fixed to 0, values >= 1 - theta to 1, the rest are
  // sampled. Must lie in [0, 0.5].
  double theta = 0.2;
  int samples = 10;
  Mode mode = Mode::kOptimistic;
  uint64_t seed = 0;
  // Single evaluation with the undecided values rounded at 0.5 (ties to 1)
  // instead of sampling.
  bool deterministic_rounding = false;
};

struct SearchResult {
  BinaryVector best_x;
  BinaryVector best_y;
  int64_t best_value = 0;
  int samples_evaluated = 0;
  int samples_infeasible = 0;  // leader alone exceeded the capacity
  int distinct_x_count = 0;
  double elapsed_s = 0.0;
};

// Samples leader vectors from per-item probabilities, answers each with the
// follower's response and keeps the best leader objective. The all-zeros
// leader vector is always evaluated as well, so the result is feasible.
SearchResult SolutionSearch(const BlkpInstance& inst,
                            std::span<const double> final_values,
                            const SearchConfig& cfg);

// Network forward pass followed by SolutionSearch; elapsed_s covers both.
SearchResult SolveHeuristic(const BlkpInstance& inst, const Checkpoint& ckpt,
                            const SearchConfig& cfg);

}  // namespace blkp

#endif  // BLKP_SEARCH_H_
