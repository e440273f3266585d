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

#include <cmath>

namespace blkp {

TripartiteGraph BuildGraph(const BlkpInstance& inst,
                           const NormalizationScheme& scheme) {
  ValidateInstance(inst);
  TripartiteGraph graph;
  graph.scheme = scheme;
  graph.total_weight = inst.TotalWeight();
  const double s = scheme.value_scale;
  for (int i = 0; i < inst.n1(); ++i) {
    graph.leader_feats.push_back({inst.a1[i] / s, inst.d1[i] / s});
  }
  for (int j = 0; j < inst.n2(); ++j) {
    graph.follower_feats.push_back(
        {inst.a2[j] / s, inst.d2[j] / s, inst.c[j] / s});
  }
  graph.cap_feat =
      static_cast<double>(inst.b) / static_cast<double>(graph.total_weight);
  return graph;
}

BlkpInstance RecoverInstance(const TripartiteGraph& graph) {
  const double s = graph.scheme.value_scale;
  auto restore = [s](double v) { return std::llround(v * s); };
  BlkpInstance inst;
  for (const auto& f : graph.leader_feats) {
    inst.a1.push_back(restore(f[0]));
    inst.d1.push_back(restore(f[1]));
  }
  for (const auto& f : graph.follower_feats) {
    inst.a2.push_back(restore(f[0]));
    inst.d2.push_back(restore(f[1]));
    inst.c.push_back(restore(f[2]));
  }
  inst.b = std::llround(graph.cap_feat *
                        static_cast<double>(graph.total_weight));
  return inst;
}

}  // namespace blkp
