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

#ifndef BLKP_GRAPH_H_
#define BLKP_GRAPH_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "blkp/instance.h"

namespace blkp {

// Feature scaling applied before the network sees an instance. Profits and
// weights are divided by value_scale; the capacity is divided by the total
// item weight, which makes it the capacity ratio of the generator.
struct NormalizationScheme {
  static constexpr int kVersion = 1;
  double value_scale = 1000.0;

  bool operator==(const NormalizationScheme&) const = default;
};

// Leader nodes, follower nodes and one constraint node. Every leader node is
// adjacent to every follower node and the constraint node touches all item
// nodes; adjacency is implied by that structure and never stored.
struct TripartiteGraph {
  std::vector<std::array<double, 2>> leader_feats;    // (a1, d1)
  std::vector<std::array<double, 3>> follower_feats;  // (a2, d2, c)
  double cap_feat = 0.0;                              // b / total weight

  NormalizationScheme scheme;
  int64_t total_weight = 0;  // capacity normalizer, kept for inversion

  int n1() const { return static_cast<int>(leader_feats.size()); }
  int n2() const { return static_cast<int>(follower_feats.size()); }
  int NodeCount() const { return n1() + n2() + 1; }
};

TripartiteGraph BuildGraph(const BlkpInstance& inst,
                           const NormalizationScheme& scheme = {});

// Inverse of BuildGraph (features are rounded back to integers).
BlkpInstance RecoverInstance(const TripartiteGraph& graph);

}  // namespace blkp

#endif  // BLKP_GRAPH_H_
