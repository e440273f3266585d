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

#ifndef BLKP_INSTANCE_H_
#define BLKP_INSTANCE_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace blkp {

// A bilevel knapsack instance where leader and follower pack disjoint item
// sets into one shared knapsack of capacity b.
//
//   leader:   max  d1.x + d2.y
//   follower: max  c.y   s.t.  a1.x + a2.y <= b,  x, y binary
struct BlkpInstance {
  std::vector<int64_t> a1;  // leader item weights
  std::vector<int64_t> d1;  // leader profit of leader items
  std::vector<int64_t> a2;  // follower item weights
  std::vector<int64_t> d2;  // leader profit of follower items
  std::vector<int64_t> c;   // follower profit of follower items
  int64_t b = 0;

  int n1() const { return static_cast<int>(a1.size()); }
  int n2() const { return static_cast<int>(a2.size()); }
  int64_t TotalWeight() const;

  bool operator==(const BlkpInstance&) const = default;
};

// Throws blkp::Error naming the offending field when an invariant fails.
void ValidateInstance(const BlkpInstance& inst);

enum class DataType { kUncorrelated, kCorrelated };

const char* DataTypeName(DataType type);  // "UC" / "C"
DataType ParseDataType(const std::string& name);

struct GenConfig {
  int n1 = 10;
  int n2 = 10;
  DataType data_type = DataType::kUncorrelated;
  double alpha_lo = 0.5;
  double alpha_hi = 0.75;
  int64_t value_max = 1000;
  uint64_t seed = 0;
};

// Random instance: a1, a2, d2 uniform in [1, value_max]; d1 and c uniform
// (UC) or equal to weight + 100 (C); b = round(alpha * total weight) with
// alpha uniform in [alpha_lo, alpha_hi].
BlkpInstance Generate(const GenConfig& cfg);

// Instance documents are JSON objects:
//   {"format": "blkp-instance", "version": 1, "n1": .., "n2": ..,
//    "a1": [..], "d1": [..], "a2": [..], "d2": [..], "c": [..], "b": ..}
inline constexpr int kInstanceFormatVersion = 1;

void WriteInstance(const BlkpInstance& inst, std::ostream& out);
BlkpInstance ReadInstance(std::istream& in);

void SaveInstance(const BlkpInstance& inst, const std::string& path);
BlkpInstance LoadInstance(const std::string& path);

}  // namespace blkp

#endif  // BLKP_INSTANCE_H_
