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

// Independent reference solvers used only by the tests. Everything here is
// plain enumeration and must not call into the solvers under test.

#ifndef BLKP_TESTS_ORACLES_H_
#define BLKP_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "blkp/instance.h"
#include "blkp/knapsack.h"
#include "blkp/rng.h"

namespace blkp::oracle {

// Best subset value by enumerating all 2^n subsets.
inline int64_t EnumerateKnapsack(const std::vector<int64_t>& profits,
                                 const std::vector<int64_t>& weights,
                                 int64_t capacity) {
  const size_t n = profits.size();
  int64_t best = 0;
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    int64_t w = 0, p = 0;
    for (size_t k = 0; k < n; ++k) {
      if (mask >> k & 1) {
        w += weights[k];
        p += profits[k];
      }
    }
    if (w <= capacity) best = std::max(best, p);
  }
  return best;
}

struct FollowerOutcome {
  int64_t z_star = 0;
  int64_t d2_value = 0;
};

// Per-subset totals of the follower items, computed once per instance.
struct FollowerSubsets {
  std::vector<int64_t> weight, c, d2;

  explicit FollowerSubsets(const BlkpInstance& inst) {
    const int n2 = inst.n2();
    const size_t count = size_t{1} << n2;
    weight.assign(count, 0);
    c.assign(count, 0);
    d2.assign(count, 0);
    for (size_t mask = 1; mask < count; ++mask) {
      const int low = __builtin_ctzll(mask);
      const size_t rest = mask & (mask - 1);
      weight[mask] = weight[rest] + inst.a2[low];
      c[mask] = c[rest] + inst.c[low];
      d2[mask] = d2[rest] + inst.d2[low];
    }
  }

  // Stage 1: best follower value under the residual capacity. Stage 2: the
  // extreme leader profit among all stage-1 optimal subsets.
  FollowerOutcome Respond(int64_t residual, Mode mode) const {
    FollowerOutcome out;
    for (size_t m = 0; m < weight.size(); ++m) {
      if (weight[m] <= residual) out.z_star = std::max(out.z_star, c[m]);
    }
    bool first = true;
    for (size_t m = 0; m < weight.size(); ++m) {
      if (weight[m] > residual || c[m] != out.z_star) continue;
      if (first || (mode == Mode::kOptimistic ? d2[m] > out.d2_value
                                              : d2[m] < out.d2_value)) {
        out.d2_value = d2[m];
        first = false;
      }
    }
    return out;
  }
};

// Bilevel optimum by enumerating every leader vector and answering each
// with the brute-force follower.
inline int64_t EnumerateBilevel(const BlkpInstance& inst, Mode mode) {
  const FollowerSubsets follower(inst);
  int64_t best = std::numeric_limits<int64_t>::min();
  for (uint64_t mask = 0; mask < (uint64_t{1} << inst.n1()); ++mask) {
    int64_t w = 0, p = 0;
    for (int i = 0; i < inst.n1(); ++i) {
      if (mask >> i & 1) {
        w += inst.a1[i];
        p += inst.d1[i];
      }
    }
    if (w > inst.b) continue;
    best = std::max(best, p + follower.Respond(inst.b - w, mode).d2_value);
  }
  return best;
}

// Random valid instance with small integers so ties are frequent.
inline BlkpInstance RandomInstance(Rng& rng, int n1, int n2, int64_t vmax) {
  BlkpInstance inst;
  for (int i = 0; i < n1; ++i) {
    inst.a1.push_back(rng.UniformInt(1, vmax));
    inst.d1.push_back(rng.UniformInt(1, vmax));
  }
  for (int j = 0; j < n2; ++j) {
    inst.a2.push_back(rng.UniformInt(1, vmax));
    inst.d2.push_back(rng.UniformInt(1, vmax));
    inst.c.push_back(rng.UniformInt(1, vmax));
  }
  inst.b = rng.UniformInt(0, inst.TotalWeight());
  return inst;
}

// Central finite difference of f at the given coordinate.
inline double CentralDifference(const std::function<double()>& f, double& coord,
                                double step = 1e-5) {
  const double saved = coord;
  coord = saved + step;
  const double up = f();
  coord = saved - step;
  const double down = f();
  coord = saved;
  return (up - down) / (2.0 * step);
}

// Follower j of the result is follower order[j] of `inst`.
inline BlkpInstance PermuteFollowers(const BlkpInstance& inst,
                              const std::vector<int>& order) {
  BlkpInstance out = inst;
  for (size_t j = 0; j < order.size(); ++j) {
    out.a2[j] = inst.a2[order[j]];
    out.d2[j] = inst.d2[order[j]];
    out.c[j] = inst.c[order[j]];
  }
  return out;
}

// Leader i of the result is leader order[i] of `inst`.
inline BlkpInstance PermuteLeaders(const BlkpInstance& inst,
                            const std::vector<int>& order) {
  BlkpInstance out = inst;
  for (size_t i = 0; i < order.size(); ++i) {
    out.a1[i] = inst.a1[order[i]];
    out.d1[i] = inst.d1[order[i]];
  }
  return out;
}

// Uniform random permutation of 0..n-1.
inline std::vector<int> RandomOrder(int n, Rng& rng) {
  std::vector<int> order(n);
  for (int k = 0; k < n; ++k) order[k] = k;
  for (int k = n; k > 1; --k) {
    std::swap(order[k - 1], order[rng.UniformInt(0, k - 1)]);
  }
  return order;
}

// Moves every entry of `params` by a uniform draw in [-scale, scale] so that
// finite-difference checks run away from ReLU kinks (zero-initialized biases
// can put pre-activations exactly at 0).
template <typename Params>
void Jitter(Params&& params, Rng& rng, double scale = 0.1) {
  for (auto p : params) {
    for (double& v : p.mutable_value()) v += rng.Uniform(-scale, scale);
  }
}

}  // namespace blkp::oracle

#endif  // BLKP_TESTS_ORACLES_H_
