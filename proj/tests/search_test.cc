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

#include "blkp/error.h"
#include "blkp/exact.h"
#include "blkp/search.h"
#include "doctest.h"
#include "oracles.h"

namespace blkp {
namespace {

TEST_CASE("values inside both fixing intervals never sample") {
  const BlkpInstance inst{{1, 1}, {5, 6}, {1}, {1}, {1}, 2};
  const std::vector<double> values{0.1, 0.9};
  for (int n : {1, 5, 40}) {
    SearchConfig cfg;
    cfg.samples = n;
    const SearchResult r = SolutionSearch(inst, values, cfg);
    CHECK(r.distinct_x_count == 1);
    CHECK(r.samples_evaluated == n);
    CHECK(r.best_x == BinaryVector{0, 1});
  }
}

TEST_CASE("thresholds are closed intervals") {
  const BlkpInstance inst{{1, 1}, {5, 6}, {1}, {1}, {1}, 3};
  SearchConfig cfg;
  cfg.theta = 0.25;
  cfg.samples = 30;
  const std::vector<double> values{0.25, 0.75};
  const SearchResult r = SolutionSearch(inst, values, cfg);
  CHECK(r.distinct_x_count == 1);
  CHECK(r.best_x == BinaryVector{0, 1});
}

TEST_CASE("deterministic rounding at theta 0.5") {
  const BlkpInstance inst{{1, 1, 1}, {5, 6, 7}, {1}, {1}, {1}, 4};
  SearchConfig cfg;
  cfg.theta = 0.5;
  cfg.deterministic_rounding = true;
  cfg.samples = 10;
  const std::vector<double> values{0.5, 0.49, 0.8};
  const SearchResult r = SolutionSearch(inst, values, cfg);
  CHECK(r.samples_evaluated == 1);
  CHECK(r.best_x == BinaryVector{1, 0, 1});
}

TEST_CASE("tiny instance finds the optimum") {
  const BlkpInstance inst{{2}, {3}, {2}, {5}, {4}, 2};
  for (int n : {1, 3, 10}) {
    SearchConfig cfg;
    cfg.samples = n;
    const std::vector<double> values{1e-9};
    const SearchResult r = SolutionSearch(inst, values, cfg);
    CHECK(r.best_x == BinaryVector{0});
    CHECK(r.best_value == 5);
    CHECK(r.best_value == SolveExact(inst, Mode::kOptimistic).opt_value);
  }
}

TEST_CASE("overweight samples are skipped and the fallback holds") {
  // Each leader item alone exceeds the capacity.
  const BlkpInstance inst{{9, 9}, {50, 50}, {3}, {2}, {1}, 8};
  SearchConfig cfg;
  cfg.samples = 6;
  const std::vector<double> values{0.95, 0.95};
  const SearchResult r = SolutionSearch(inst, values, cfg);
  CHECK(r.samples_infeasible == 6);
  CHECK(r.best_x == BinaryVector{0, 0});
  CHECK(r.best_value == 2);
}

TEST_CASE("results are feasible, bounded and monotone in N") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const BlkpInstance inst = oracle::RandomInstance(rng, 7, 6, 100);
    std::vector<double> values(7);
    for (double& v : values) v = rng.UniformUnit();
    const Mode mode = trial % 2 ? Mode::kPessimistic : Mode::kOptimistic;
    const int64_t opt = SolveExact(inst, mode).opt_value;
    int64_t previous = std::numeric_limits<int64_t>::min();
    for (int n : {1, 2, 5, 10, 30}) {
      SearchConfig cfg;
      cfg.samples = n;
      cfg.mode = mode;
      cfg.seed = 1000 + trial;
      const SearchResult r = SolutionSearch(inst, values, cfg);
      const BilevelVerdict v = EvaluateBilevel(inst, r.best_x, r.best_y, mode);
      CHECK(v.feasible);
      CHECK(v.consistent);
      CHECK(v.leader_obj == r.best_value);
      CHECK(r.best_value <= opt);
      CHECK(r.best_value >= previous);
      previous = r.best_value;
    }
  }
}

TEST_CASE("search config validation") {
  const BlkpInstance inst{{2}, {3}, {2}, {5}, {4}, 2};
  SearchConfig cfg;
  cfg.theta = 0.6;
  const std::vector<double> one{0.5};
  CHECK_THROWS_AS(SolutionSearch(inst, one, cfg), Error);
  cfg = SearchConfig{};
  cfg.samples = 0;
  CHECK_THROWS_AS(SolutionSearch(inst, one, cfg), Error);
  const std::vector<double> two{0.5, 0.5};
  CHECK_THROWS_AS(SolutionSearch(inst, two, SearchConfig{}), Error);
}

TEST_CASE("solve_heuristic is feasible with an untrained model") {
  const PnaConfig pcfg;
  const Checkpoint ckpt{pcfg, {}, ModelParams::Initialize(pcfg, 1), {}};
  for (uint64_t seed = 0; seed < 10; ++seed) {
    GenConfig gen;
    gen.n1 = 8;
    gen.n2 = 8;
    gen.seed = seed;
    const BlkpInstance inst = Generate(gen);
    const SearchResult r = SolveHeuristic(inst, ckpt, SearchConfig{});
    CHECK(EvaluateBilevel(inst, r.best_x, r.best_y, Mode::kOptimistic).consistent);
    CHECK(r.best_value <= SolveExact(inst, Mode::kOptimistic).opt_value);
  }
}

}  // namespace
}  // namespace blkp
