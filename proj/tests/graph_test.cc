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

#include "blkp/graph.h"
#include "doctest.h"

namespace blkp {
namespace {

TEST_CASE("features are scaled by value_max and total weight") {
  const BlkpInstance inst{{500}, {250}, {100, 400}, {1000, 20}, {7, 8}, 750};
  const TripartiteGraph g = BuildGraph(inst);
  CHECK(g.leader_feats[0][0] == doctest::Approx(0.5));
  CHECK(g.leader_feats[0][1] == doctest::Approx(0.25));
  CHECK(g.follower_feats[0][1] == doctest::Approx(1.0));
  CHECK(g.follower_feats[1][2] == doctest::Approx(0.008));
  CHECK(g.cap_feat == doctest::Approx(0.75));
  CHECK(g.NodeCount() == 4);
}

TEST_CASE("capacity feature recovers the generator ratio") {
  GenConfig cfg;
  cfg.n1 = 4;
  cfg.n2 = 4;
  cfg.alpha_lo = cfg.alpha_hi = 0.75;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    cfg.seed = seed;
    const BlkpInstance inst = Generate(cfg);
    if (inst.TotalWeight() % 4 != 0) continue;  // rounding would bite
    CHECK(BuildGraph(inst).cap_feat == 0.75);
  }
}

TEST_CASE("follower permutation permutes follower features only") {
  GenConfig cfg;
  cfg.n1 = 3;
  cfg.n2 = 4;
  const BlkpInstance inst = Generate(cfg);
  BlkpInstance perm = inst;
  const std::vector<int> order{2, 0, 3, 1};
  for (int j = 0; j < 4; ++j) {
    perm.a2[j] = inst.a2[order[j]];
    perm.d2[j] = inst.d2[order[j]];
    perm.c[j] = inst.c[order[j]];
  }
  const TripartiteGraph g = BuildGraph(inst), h = BuildGraph(perm);
  CHECK(g.leader_feats == h.leader_feats);
  for (int j = 0; j < 4; ++j) CHECK(h.follower_feats[j] == g.follower_feats[order[j]]);
  CHECK(g.cap_feat == h.cap_feat);
}

TEST_CASE("graphs invert back to their instances") {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    GenConfig cfg;
    cfg.n1 = 1 + static_cast<int>(seed % 13);
    cfg.n2 = 1 + static_cast<int>(seed % 7);
    cfg.seed = seed;
    const BlkpInstance inst = Generate(cfg);
    const TripartiteGraph g = BuildGraph(inst);
    CHECK(g.NodeCount() == inst.n1() + inst.n2() + 1);
    CHECK(RecoverInstance(g) == inst);
  }
}

}  // namespace
}  // namespace blkp
