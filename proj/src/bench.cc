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

#include "blkp/bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <tuple>

#include "blkp/error.h"
#include "blkp/exact.h"
#include "blkp/rng.h"
#include "blkp/search.h"
#include "json.hpp"

namespace blkp {

GapSummary ComputeGaps(const std::map<std::string, int64_t>& heuristic,
                       const std::map<std::string, int64_t>& exact) {
  GapSummary summary;
  if (heuristic.empty()) return summary;
  double total = 0.0;
  for (const auto& [id, value] : heuristic) {
    const auto it = exact.find(id);
    if (it == exact.end()) {
      throw Error(ErrorCode::kMissingExactValue,
                  "no exact value for instance '" + id + "'");
    }
    if (it->second <= 0) {
      throw Error(ErrorCode::kMissingExactValue,
                  "exact value for '" + id + "' must be positive");
    }
    const double gap = 100.0 * static_cast<double>(it->second - value) /
                       static_cast<double>(it->second);
    total += gap;
    summary.max_gap = std::max(summary.max_gap, gap);
  }
  summary.avg_gap = total / static_cast<double>(heuristic.size());
  return summary;
}

DataType InferDataType(const BlkpInstance& inst) {
  for (int i = 0; i < inst.n1(); ++i) {
    if (inst.d1[i] != inst.a1[i] + 100) return DataType::kUncorrelated;
  }
  for (int j = 0; j < inst.n2(); ++j) {
    if (inst.c[j] != inst.a2[j] + 100) return DataType::kUncorrelated;
  }
  return DataType::kCorrelated;
}

std::string BenchMethod::Label() const {
  switch (kind) {
    case Kind::kNoSampling:
      return "no_sampling";
    case Kind::kExact:
      return "exact";
    case Kind::kSampling: {
      std::ostringstream s;
      s << "sampling(" << theta << "," << samples << ")";
      return s.str();
    }
  }
  return "?";
}

uint64_t Fnv1a64(const std::string& bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string HexHash(uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

BenchReport RunBench(std::vector<BenchInstance> instances,
                     const Checkpoint& ckpt, const BenchConfig& cfg) {
  std::sort(instances.begin(), instances.end(),
            [](const BenchInstance& l, const BenchInstance& r) {
              return l.id < r.id;
            });
  std::ostringstream serialized;
  SaveCheckpoint(ckpt, serialized);
  const std::string model_text = serialized.str();

  using GroupKey = std::tuple<std::string, int, int>;
  std::vector<GroupKey> group_order;
  std::map<GroupKey, std::vector<size_t>> groups;
  for (size_t k = 0; k < instances.size(); ++k) {
    BenchInstance& item = instances[k];
    if (!item.exact_value) {
      const ExactResult exact = SolveExact(item.instance, cfg.mode);
      item.exact_value = exact.opt_value;
      item.exact_time_s = exact.elapsed_s;
    }
    const GroupKey key{DataTypeName(InferDataType(item.instance)),
                       item.instance.n1(), item.instance.n2()};
    if (!groups.count(key)) group_order.push_back(key);
    groups[key].push_back(k);
  }

  BenchReport report;
  for (const GroupKey& key : group_order) {
    const std::vector<size_t>& members = groups[key];
    for (const BenchMethod& method : cfg.methods) {
      std::map<std::string, int64_t> values, exact;
      double time_sum = 0.0, obj_sum = 0.0;
      for (size_t k : members) {
        const BenchInstance& item = instances[k];
        exact[item.id] = *item.exact_value;
        int64_t value = 0;
        double seconds = 0.0;
        if (method.kind == BenchMethod::Kind::kExact) {
          value = *item.exact_value;
          seconds = item.exact_time_s;
        } else {
          SearchConfig search;
          search.mode = cfg.mode;
          if (method.kind == BenchMethod::Kind::kNoSampling) {
            search.theta = 0.5;
            search.deterministic_rounding = true;
          } else {
            search.theta = method.theta;
            search.samples = method.samples;
          }
          search.seed = MixSeed(cfg.seed, k);
          const SearchResult result = SolveHeuristic(item.instance, ckpt, search);
          value = result.best_value;
          seconds = result.elapsed_s;
        }
        values[item.id] = value;
        obj_sum += static_cast<double>(value);
        time_sum += seconds;
      }
      const GapSummary gaps = ComputeGaps(values, exact);
      BenchRow row;
      std::tie(row.data_type, row.n1, row.n2) = key;
      row.method = method.Label();
      row.instances = static_cast<int>(members.size());
      row.avg_obj = obj_sum / static_cast<double>(members.size());
      row.avg_gap = gaps.avg_gap;
      row.max_gap = gaps.max_gap;
      row.avg_time_s = time_sum / static_cast<double>(members.size());
      row.seed = cfg.seed;
      row.config_hash = HexHash(Fnv1a64(model_text + "|" + row.method + "|" +
                                        ModeName(cfg.mode)));
      report.rows.push_back(row);
    }
  }
  return report;
}

void WriteReportTsv(const BenchReport& report, std::ostream& out) {
  out << "data_type\tn1\tn2\tmethod\tinstances\tavg_obj\tavg_gap_pct\t"
         "max_gap_pct\tavg_time_s\tseed\tconfig_hash\n";
  out << std::fixed;
  for (const BenchRow& r : report.rows) {
    out << r.data_type << '\t' << r.n1 << '\t' << r.n2 << '\t' << r.method
        << '\t' << r.instances << '\t' << std::setprecision(3) << r.avg_obj
        << '\t' << std::setprecision(4) << r.avg_gap << '\t' << r.max_gap
        << '\t' << std::setprecision(6) << r.avg_time_s << '\t' << r.seed
        << '\t' << r.config_hash << '\n';
  }
}

void WriteReportJson(const BenchReport& report, std::ostream& out) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BenchRow& r : report.rows) {
    rows.push_back({{"data_type", r.data_type},
                    {"n1", r.n1},
                    {"n2", r.n2},
                    {"method", r.method},
                    {"instances", r.instances},
                    {"avg_obj", r.avg_obj},
                    {"avg_gap_pct", r.avg_gap},
                    {"max_gap_pct", r.max_gap},
                    {"avg_time_s", r.avg_time_s},
                    {"seed", r.seed},
                    {"config_hash", r.config_hash}});
  }
  out << nlohmann::json{{"rows", rows}}.dump(2) << "\n";
}

}  // namespace blkp
