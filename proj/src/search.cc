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

#include "blkp/search.h"

#include <chrono>
#include <map>
#include <set>
#include <string>

#include "blkp/error.h"
#include "blkp/rng.h"

namespace blkp {

namespace {

void ValidateSearch(const BlkpInstance& inst, std::span<const double> values,
                    const SearchConfig& cfg) {
  if (static_cast<int>(values.size()) != inst.n1()) {
    throw Error(ErrorCode::kShapeMismatch,
                "got " + std::to_string(values.size()) +
                    " final values for " + std::to_string(inst.n1()) +
                    " leader items");
  }
  if (!(cfg.theta >= 0.0 && cfg.theta <= 0.5)) {
    throw Error(ErrorCode::kInvalidConfig, "theta must lie in [0, 0.5]");
  }
  if (cfg.samples < 1) {
    throw Error(ErrorCode::kInvalidConfig, "sample count must be >= 1");
  }
}

}  // namespace

SearchResult SolutionSearch(const BlkpInstance& inst,
                            std::span<const double> final_values,
                            const SearchConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ValidateSearch(inst, final_values, cfg);
  const int n1 = inst.n1();

  // Draw every sample before solving anything so the random stream depends
  // only on the seed and the final values.
  std::vector<BinaryVector> draws;
  Rng rng(cfg.seed);
  const int count = cfg.deterministic_rounding ? 1 : cfg.samples;
  for (int k = 0; k < count; ++k) {
    BinaryVector x(n1, 0);
    for (int i = 0; i < n1; ++i) {
      const double v = final_values[i];
      if (v >= 1.0 - cfg.theta) {
        x[i] = 1;
      } else if (v <= cfg.theta) {
        x[i] = 0;
      } else if (cfg.deterministic_rounding) {
        x[i] = v >= 0.5 ? 1 : 0;
      } else {
        x[i] = rng.Bernoulli(v) ? 1 : 0;
      }
    }
    draws.push_back(std::move(x));
  }

  SearchResult result;
  bool have_best = false;
  auto consider = [&](const FollowerResponse& response, const BinaryVector& x) {
    if (!have_best || response.leader_value > result.best_value) {
      have_best = true;
      result.best_value = response.leader_value;
      result.best_x = x;
      result.best_y = response.y;
    }
  };

  std::map<BinaryVector, FollowerResponse> solved;
  std::set<BinaryVector> infeasible;
  for (const BinaryVector& x : draws) {
    ++result.samples_evaluated;
    if (infeasible.count(x) || Dot(inst.a1, x) > inst.b) {
      infeasible.insert(x);
      ++result.samples_infeasible;
      continue;
    }
    auto it = solved.find(x);
    if (it == solved.end()) {
      it = solved.emplace(x, FollowerRespond(inst, x, cfg.mode)).first;
    }
    consider(it->second, x);
  }
  result.distinct_x_count = static_cast<int>(solved.size() + infeasible.size());

  const BinaryVector zeros(n1, 0);
  auto it = solved.find(zeros);
  consider(it != solved.end() ? it->second
                              : FollowerRespond(inst, zeros, cfg.mode),
           zeros);

  result.elapsed_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

SearchResult SolveHeuristic(const BlkpInstance& inst, const Checkpoint& ckpt,
                            const SearchConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> values =
      Forward(inst, ckpt.params, ckpt.config, ckpt.scheme);
  SearchResult result = SolutionSearch(inst, values, cfg);
  result.elapsed_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

}  // namespace blkp
