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

#include <set>
#include <sstream>

#include "blkp/error.h"
#include "blkp/instance.h"
#include "blkp/rng.h"
#include "doctest.h"

namespace blkp {
namespace {

ErrorCode ReadError(const std::string& doc) {
  std::istringstream in(doc);
  try {
    ReadInstance(in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("document was accepted: " << doc);
  return ErrorCode::kIo;
}

TEST_CASE("correlated instances add 100 to the weights") {
  GenConfig cfg;
  cfg.n1 = 2;
  cfg.n2 = 2;
  cfg.data_type = DataType::kCorrelated;
  cfg.alpha_lo = cfg.alpha_hi = 0.5;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    cfg.seed = seed;
    const BlkpInstance inst = Generate(cfg);
    for (int i = 0; i < 2; ++i) CHECK(inst.d1[i] == inst.a1[i] + 100);
    for (int j = 0; j < 2; ++j) CHECK(inst.c[j] == inst.a2[j] + 100);
    CHECK(inst.b == std::llround(0.5 * static_cast<double>(inst.TotalWeight())));
  }
}

TEST_CASE("generation is deterministic in the seed") {
  GenConfig cfg;
  cfg.seed = 77;
  CHECK(Generate(cfg) == Generate(cfg));
}

TEST_CASE("value_max of one pins every coefficient") {
  GenConfig cfg;
  cfg.n1 = 3;
  cfg.n2 = 4;
  cfg.value_max = 1;
  cfg.alpha_lo = cfg.alpha_hi = 1.0;
  const BlkpInstance inst = Generate(cfg);
  for (auto* v : {&inst.a1, &inst.d1, &inst.a2, &inst.d2, &inst.c}) {
    for (int64_t x : *v) CHECK(x == 1);
  }
  CHECK(inst.b == 7);
}

TEST_CASE("generated instances satisfy the invariants") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    GenConfig cfg;
    cfg.n1 = static_cast<int>(rng.UniformInt(1, 30));
    cfg.n2 = static_cast<int>(rng.UniformInt(1, 30));
    cfg.data_type = rng.Bernoulli(0.5) ? DataType::kCorrelated
                                       : DataType::kUncorrelated;
    cfg.alpha_lo = rng.Uniform(0.05, 1.0);
    cfg.alpha_hi = rng.Uniform(cfg.alpha_lo, 1.0);
    cfg.value_max = rng.UniformInt(1, 2000);
    cfg.seed = rng.NextU64();
    const BlkpInstance inst = Generate(cfg);
    CHECK_NOTHROW(ValidateInstance(inst));
    CHECK(inst.n1() == cfg.n1);
    CHECK(inst.n2() == cfg.n2);
    for (int64_t a : inst.a1) CHECK(a <= cfg.value_max);
    const double total = static_cast<double>(inst.TotalWeight());
    CHECK(inst.b >= std::floor(cfg.alpha_lo * total));
    CHECK(inst.b <= std::ceil(cfg.alpha_hi * total));
  }
}

TEST_CASE("different seeds give different instances") {
  GenConfig cfg;
  int distinct = 0;
  for (uint64_t k = 0; k < 100; ++k) {
    cfg.seed = 2 * k;
    const BlkpInstance first = Generate(cfg);
    cfg.seed = 2 * k + 1;
    distinct += first != Generate(cfg);
  }
  CHECK(distinct == 100);
}

TEST_CASE("invalid generator configs are rejected") {
  GenConfig cfg;
  cfg.n1 = 0;
  CHECK_THROWS_AS(Generate(cfg), Error);
  cfg = GenConfig{};
  cfg.alpha_lo = 0.8;
  cfg.alpha_hi = 0.6;
  CHECK_THROWS_AS(Generate(cfg), Error);
}

TEST_CASE("instance documents round-trip") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    GenConfig cfg;
    cfg.n1 = static_cast<int>(rng.UniformInt(1, 40));
    cfg.n2 = static_cast<int>(rng.UniformInt(1, 40));
    cfg.seed = rng.NextU64();
    const BlkpInstance inst = Generate(cfg);
    std::stringstream buf;
    WriteInstance(inst, buf);
    CHECK(ReadInstance(buf) == inst);
  }
}

TEST_CASE("malformed instance documents name the problem") {
  const std::string ok =
      R"({"format":"blkp-instance","version":1,"n1":1,"n2":1,)"
      R"("a1":[2],"d1":[3],"a2":[2],"d2":[5],"c":[4],"b":2})";
  std::istringstream in(ok);
  CHECK(ReadInstance(in).b == 2);

  CHECK(ReadError(R"({"format":"blkp-instance","version":1,"n1":1,"n2":1,)"
                  R"("a1":[2],"d1":[3,4],"a2":[2],"d2":[5],"c":[4],"b":2})") ==
        ErrorCode::kLengthMismatch);
  CHECK(ReadError(R"({"format":"blkp-instance","version":1,"n1":1,"n2":1,)"
                  R"("a1":[0],"d1":[3],"a2":[2],"d2":[5],"c":[4],"b":2})") ==
        ErrorCode::kNonPositive);
  CHECK(ReadError(R"({"format":"blkp-instance","version":1,"n1":1,"n2":1,)"
                  R"("a1":[2],"d1":[3],"a2":[2],"d2":[5],"c":[4],"b":9})") ==
        ErrorCode::kCapacityOutOfRange);
  CHECK(ReadError(R"({"format":"blkp-instance","version":2})") ==
        ErrorCode::kVersionMismatch);
  CHECK(ReadError("{\"format\":\"blkp-instance\",") ==
        ErrorCode::kMalformedDocument);
}

}  // namespace
}  // namespace blkp
