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

#include <limits>

#include "blkp/error.h"
#include "blkp/knapsack.h"
#include "doctest.h"
#include "oracles.h"

namespace blkp {
namespace {

// n1 = 1, n2 = 1 instance used throughout the examples.
BlkpInstance TinyInstance() {
  return {{2}, {3}, {2}, {5}, {4}, 2};
}

TEST_CASE("knapsack_max small cases") {
  const std::vector<int64_t> p{5}, w{3};
  auto zero = KnapsackMax(p, w, 0);
  CHECK(zero.value == 0);
  CHECK(zero.selection == BinaryVector{0});
  auto fits = KnapsackMax(p, w, 3);
  CHECK(fits.value == 5);
  CHECK(fits.selection == BinaryVector{1});

  const std::vector<int64_t> p3{6, 10, 12}, w3{1, 2, 3};
  CHECK(oracle::EnumerateKnapsack(p3, w3, 5) == 22);
  auto three = KnapsackMax(p3, w3, 5);
  CHECK(three.value == 22);
  CHECK(three.selection == BinaryVector{0, 1, 1});
}

TEST_CASE("knapsack_max matches subset enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(rng.UniformInt(0, 15));
    std::vector<int64_t> p(n), w(n);
    for (int k = 0; k < n; ++k) {
      p[k] = rng.UniformInt(0, 50);
      w[k] = rng.UniformInt(1, 30);
    }
    const int64_t cap = rng.UniformInt(0, 15 * n + 1);
    const KnapsackSolution sol = KnapsackMax(p, w, cap);
    REQUIRE(sol.value == oracle::EnumerateKnapsack(p, w, cap));
    int64_t weight = 0, profit = 0;
    for (int k = 0; k < n; ++k) {
      if (sol.selection[k]) {
        weight += w[k];
        profit += p[k];
      }
    }
    CHECK(weight <= cap);
    CHECK(profit == sol.value);
  }
}

TEST_CASE("value profile agrees with single solves") {
  const std::vector<int64_t> p{7, 3, 9, 4}, w{4, 2, 5, 3};
  const auto profile = KnapsackValueProfile(p, w, 14);
  for (int64_t cap = 0; cap <= 14; ++cap) {
    CHECK(profile[cap] == KnapsackMax(p, w, cap).value);
  }
}

TEST_CASE("knapsack input errors") {
  const int64_t big = std::numeric_limits<int64_t>::max() / 2 + 1;
  const std::vector<int64_t> p{big, big}, w{1, 1};
  try {
    KnapsackMax(p, w, 2);
    FAIL("expected overflow error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOverflowRisk);
  }
  const std::vector<int64_t> p1{1}, w2{1, 2};
  CHECK_THROWS_AS(KnapsackMax(p1, w2, 3), Error);
}

TEST_CASE("follower response examples") {
  const BlkpInstance inst = TinyInstance();
  const BinaryVector one{1}, zero{0};
  FollowerResponse r = FollowerRespond(inst, one, Mode::kOptimistic);
  CHECK(r.y == BinaryVector{0});
  CHECK(r.z_star == 0);
  CHECK(r.leader_value == 3);
  CHECK(r.residual_capacity == 0);

  r = FollowerRespond(inst, zero, Mode::kOptimistic);
  CHECK(r.y == BinaryVector{1});
  CHECK(r.z_star == 4);
  CHECK(r.leader_value == 5);

  // Two follower items with equal c compete for one unit of capacity.
  const BlkpInstance tie{{5}, {1}, {1, 1}, {1, 9}, {4, 4}, 1};
  r = FollowerRespond(tie, zero, Mode::kOptimistic);
  CHECK(r.y == BinaryVector{0, 1});
  CHECK(r.z_star == 4);
  CHECK(r.leader_value == 9);
  r = FollowerRespond(tie, zero, Mode::kPessimistic);
  CHECK(r.y == BinaryVector{1, 0});
  CHECK(r.z_star == 4);
  CHECK(r.leader_value == 1);
}

TEST_CASE("pessimistic tie-break with optima of different cardinality") {
  // Both {0} and {1, 2} reach c = 6 at capacity 2; d2 sums are 5 and 6.
  const BlkpInstance inst{{9}, {1}, {2, 1, 1}, {5, 3, 3}, {6, 3, 3}, 2};
  const BinaryVector zero{0};
  const auto pes = FollowerRespond(inst, zero, Mode::kPessimistic);
  CHECK(pes.z_star == 6);
  CHECK(pes.leader_value == 5);
  const auto opt = FollowerRespond(inst, zero, Mode::kOptimistic);
  CHECK(opt.z_star == 6);
  CHECK(opt.leader_value == 6);
}

TEST_CASE("infeasible leader is an error") {
  const BlkpInstance inst{{3}, {1}, {1}, {1}, {1}, 2};
  const BinaryVector one{1};
  try {
    FollowerRespond(inst, one, Mode::kOptimistic);
    FAIL("expected infeasible leader");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasibleLeader);
  }
}

TEST_CASE("follower response matches the two-stage brute force") {
  Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n1 = static_cast<int>(rng.UniformInt(1, 6));
    const int n2 = static_cast<int>(rng.UniformInt(1, 12));
    const BlkpInstance inst = oracle::RandomInstance(rng, n1, n2, 12);
    const oracle::FollowerSubsets brute(inst);
    BinaryVector x(n1, 0);
    for (auto& bit : x) bit = rng.Bernoulli(0.4);
    if (Dot(inst.a1, x) > inst.b) x.assign(n1, 0);
    for (Mode mode : {Mode::kOptimistic, Mode::kPessimistic}) {
      const FollowerResponse r = FollowerRespond(inst, x, mode);
      const auto expected = brute.Respond(r.residual_capacity, mode);
      REQUIRE(r.z_star == expected.z_star);
      REQUIRE(r.leader_value == Dot(inst.d1, x) + expected.d2_value);
      CHECK(Dot(inst.a2, r.y) <= r.residual_capacity);
      CHECK(r.z_star == Dot(inst.c, r.y));
    }
    CHECK(FollowerRespond(inst, x, Mode::kOptimistic).leader_value >=
          FollowerRespond(inst, x, Mode::kPessimistic).leader_value);
    CHECK_NOTHROW(FollowerRespond(inst, BinaryVector(n1, 0), Mode::kOptimistic));
  }
}

TEST_CASE("response table agrees with direct responses") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const BlkpInstance inst = oracle::RandomInstance(rng, 1, 8, 20);
    for (Mode mode : {Mode::kOptimistic, Mode::kPessimistic}) {
      const ResponseTable table = BuildResponseTable(inst, mode);
      const oracle::FollowerSubsets brute(inst);
      for (int64_t r = 0; r <= inst.b; ++r) {
        const auto expected = brute.Respond(r, mode);
        CHECK(table.z_star[r] == expected.z_star);
        CHECK(table.d2_value[r] == expected.d2_value);
      }
    }
  }
}

TEST_CASE("evaluate_bilevel verdicts") {
  const BlkpInstance inst = TinyInstance();
  const BinaryVector one{1}, zero{0};
  BilevelVerdict v = EvaluateBilevel(inst, one, zero, Mode::kOptimistic);
  CHECK(v.feasible);
  CHECK(v.consistent);
  CHECK(v.leader_obj == 3);

  v = EvaluateBilevel(inst, zero, zero, Mode::kOptimistic);
  CHECK_FALSE(v.feasible);
  CHECK(v.follower_obj == 0);

  v = EvaluateBilevel(inst, one, one, Mode::kOptimistic);
  CHECK_FALSE(v.feasible);

  // Follower-optimal but not the optimistic tie-break.
  const BlkpInstance tie{{5}, {1}, {1, 1}, {1, 9}, {4, 4}, 1};
  const BinaryVector y_low{1, 0};
  v = EvaluateBilevel(tie, zero, y_low, Mode::kOptimistic);
  CHECK(v.feasible);
  CHECK_FALSE(v.consistent);
  v = EvaluateBilevel(tie, zero, y_low, Mode::kPessimistic);
  CHECK(v.consistent);
}

}  // namespace
}  // namespace blkp
