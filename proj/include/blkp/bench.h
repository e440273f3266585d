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

#ifndef BLKP_BENCH_H_
#define BLKP_BENCH_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blkp/instance.h"
#include "blkp/knapsack.h"
#include "blkp/pna.h"

namespace blkp {

struct GapSummary {
  double avg_gap = 0.0;  // percent
  double max_gap = 0.0;  // percent
};

// Per-instance gap 100 * (exact - heuristic) / exact, averaged and maxed.
// Every heuristic key needs a positive exact value (kMissingExactValue).
GapSummary ComputeGaps(const std::map<std::string, int64_t>& heuristic,
                       const std::map<std::string, int64_t>& exact);

// C when every d1 = a1 + 100 and c = a2 + 100, UC otherwise.
DataType InferDataType(const BlkpInstance& inst);

struct BenchMethod {
  enum class Kind { kNoSampling, kSampling, kExact };
  Kind kind = Kind::kSampling;
  double theta = 0.2;
  int samples = 10;

  std::string Label() const;  // "no_sampling", "sampling(0.2,10)", "exact"
};

struct BenchInstance {
  std::string id;
  BlkpInstance instance;
  std::optional<int64_t> exact_value;  // solved on demand when absent
  double exact_time_s = 0.0;
};

struct BenchRow {
  std::string data_type;
  int n1 = 0;
  int n2 = 0;
  std::string method;
  int instances = 0;
  double avg_obj = 0.0;
  double avg_gap = 0.0;
  double max_gap = 0.0;
  double avg_time_s = 0.0;
  uint64_t seed = 0;
  std::string config_hash;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

struct BenchConfig {
  std::vector<BenchMethod> methods;
  Mode mode = Mode::kOptimistic;
  uint64_t seed = 0;  // instance k samples with MixSeed(seed, k)
};

// Rows grouped by (data type, n1, n2) in first-seen order, one row per
// method. Instances are processed in ascending id order.
BenchReport RunBench(std::vector<BenchInstance> instances,
                     const Checkpoint& ckpt, const BenchConfig& cfg);

uint64_t Fnv1a64(const std::string& bytes);
std::string HexHash(uint64_t hash);

void WriteReportTsv(const BenchReport& report, std::ostream& out);
void WriteReportJson(const BenchReport& report, std::ostream& out);

}  // namespace blkp

#endif  // BLKP_BENCH_H_
