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

#include <sstream>

#include "blkp/bench.h"
#include "blkp/error.h"
#include "doctest.h"
#include "json.hpp"

namespace blkp {
namespace {

TEST_CASE("gap arithmetic") {
  GapSummary g = ComputeGaps({{"a", 100}, {"b", 50}}, {{"a", 100}, {"b", 50}});
  CHECK(g.avg_gap == 0.0);
  CHECK(g.max_gap == 0.0);

  g = ComputeGaps({{"a", 99}}, {{"a", 100}});
  CHECK(g.avg_gap == doctest::Approx(1.0));
  CHECK(g.max_gap == doctest::Approx(1.0));

  g = ComputeGaps({{"a", 100}, {"b", 96}}, {{"a", 100}, {"b", 100}});
  CHECK(g.avg_gap == doctest::Approx(2.0));
  CHECK(g.max_gap == doctest::Approx(4.0));

  try {
    ComputeGaps({{"a", 1}, {"z", 1}}, {{"a", 1}});
    FAIL("missing key accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingExactValue);
  }
}

TEST_CASE("data type inference") {
  GenConfig cfg;
  cfg.data_type = DataType::kCorrelated;
  CHECK(InferDataType(Generate(cfg)) == DataType::kCorrelated);
  cfg.data_type = DataType::kUncorrelated;
  CHECK(InferDataType(Generate(cfg)) == DataType::kUncorrelated);
}

TEST_CASE("bench report rows") {
  const PnaConfig pcfg;
  const Checkpoint ckpt{pcfg, {}, ModelParams::Initialize(pcfg, 2), {}};
  std::vector<BenchInstance> items;
  for (int k = 0; k < 6; ++k) {
    GenConfig gen;
    gen.n1 = 6;
    gen.n2 = 6;
    gen.data_type = k % 2 ? DataType::kCorrelated : DataType::kUncorrelated;
    gen.seed = k;
    items.push_back({"inst" + std::to_string(k), Generate(gen), {}, 0.0});
  }
  BenchConfig cfg;
  cfg.seed = 4;
  cfg.methods = {{BenchMethod::Kind::kNoSampling, 0.5, 1},
                 {BenchMethod::Kind::kSampling, 0.2, 10},
                 {BenchMethod::Kind::kSampling, 0.2, 50},
                 {BenchMethod::Kind::kExact, 0, 0}};
  const BenchReport report = RunBench(items, ckpt, cfg);
  REQUIRE(report.rows.size() == 8);
  for (size_t g = 0; g < 2; ++g) {
    const BenchRow* rows = &report.rows[4 * g];
    CHECK(rows[0].method == "no_sampling");
    CHECK(rows[1].method == "sampling(0.2,10)");
    CHECK(rows[3].method == "exact");
    CHECK(rows[3].avg_gap == 0.0);
    CHECK(rows[3].max_gap == 0.0);
    for (int m = 0; m < 4; ++m) {
      CHECK(rows[m].avg_gap >= 0.0);
      CHECK(rows[m].avg_gap <= rows[m].max_gap);
      CHECK(rows[m].instances == 3);
      CHECK(rows[m].config_hash.size() == 16);
    }
    CHECK(rows[2].avg_obj >= rows[1].avg_obj);
  }
  CHECK(report.rows[0].config_hash != report.rows[1].config_hash);

  std::ostringstream tsv, json;
  WriteReportTsv(report, tsv);
  WriteReportJson(report, json);
  CHECK(tsv.str().find("sampling(0.2,50)") != std::string::npos);
  const auto doc = nlohmann::json::parse(json.str());
  CHECK(doc["rows"].size() == 8);
  CHECK(doc["rows"][1]["method"] == "sampling(0.2,10)");

  // Same inputs, same report (timings aside).
  const BenchReport again = RunBench(items, ckpt, cfg);
  for (size_t r = 0; r < report.rows.size(); ++r) {
    CHECK(again.rows[r].avg_obj == report.rows[r].avg_obj);
    CHECK(again.rows[r].config_hash == report.rows[r].config_hash);
  }
}

}  // namespace
}  // namespace blkp
