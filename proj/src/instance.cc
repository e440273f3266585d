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

#include "blkp/instance.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "blkp/error.h"
#include "blkp/rng.h"
#include "json.hpp"

namespace blkp {

namespace {

using nlohmann::json;

void CheckArray(const std::vector<int64_t>& values, int expected,
                const char* field, const char* count_field) {
  if (static_cast<int>(values.size()) != expected) {
    throw Error(ErrorCode::kLengthMismatch,
                std::string(field) + " has length " +
                    std::to_string(values.size()) + " but " + count_field +
                    " = " + std::to_string(expected));
  }
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) {
      throw Error(ErrorCode::kNonPositive,
                  std::string(field) + "[" + std::to_string(i) +
                      "] = " + std::to_string(values[i]) + " must be >= 1");
    }
  }
}

std::vector<int64_t> ReadArray(const json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_array()) {
    throw Error(ErrorCode::kMalformedDocument,
                std::string("missing array field '") + field + "'");
  }
  std::vector<int64_t> out;
  out.reserve(doc[field].size());
  for (const auto& v : doc[field]) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::kMalformedDocument,
                  std::string("non-integer entry in '") + field + "'");
    }
    out.push_back(v.get<int64_t>());
  }
  return out;
}

int64_t ReadInt(const json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_number_integer()) {
    throw Error(ErrorCode::kMalformedDocument,
                std::string("missing integer field '") + field + "'");
  }
  return doc[field].get<int64_t>();
}

}  // namespace

int64_t BlkpInstance::TotalWeight() const {
  return std::accumulate(a1.begin(), a1.end(), int64_t{0}) +
         std::accumulate(a2.begin(), a2.end(), int64_t{0});
}

void ValidateInstance(const BlkpInstance& inst) {
  if (inst.a1.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "n1 must be >= 1");
  }
  if (inst.a2.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "n2 must be >= 1");
  }
  CheckArray(inst.a1, inst.n1(), "a1", "n1");
  CheckArray(inst.d1, inst.n1(), "d1", "n1");
  CheckArray(inst.a2, inst.n2(), "a2", "n2");
  CheckArray(inst.d2, inst.n2(), "d2", "n2");
  CheckArray(inst.c, inst.n2(), "c", "n2");
  if (inst.b < 0 || inst.b > inst.TotalWeight()) {
    throw Error(ErrorCode::kCapacityOutOfRange,
                "b = " + std::to_string(inst.b) + " outside [0, " +
                    std::to_string(inst.TotalWeight()) + "]");
  }
}

const char* DataTypeName(DataType type) {
  return type == DataType::kCorrelated ? "C" : "UC";
}

DataType ParseDataType(const std::string& name) {
  if (name == "UC" || name == "uc") return DataType::kUncorrelated;
  if (name == "C" || name == "c") return DataType::kCorrelated;
  throw Error(ErrorCode::kInvalidConfig, "unknown data type '" + name + "'");
}

BlkpInstance Generate(const GenConfig& cfg) {
  if (cfg.n1 < 1 || cfg.n2 < 1) {
    throw Error(ErrorCode::kInvalidConfig, "n1 and n2 must be >= 1");
  }
  if (!(cfg.alpha_lo > 0.0) || !(cfg.alpha_lo <= cfg.alpha_hi) ||
      !(cfg.alpha_hi <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "alpha range must satisfy 0 < alpha_lo <= alpha_hi <= 1");
  }
  if (cfg.value_max < 1) {
    throw Error(ErrorCode::kInvalidConfig, "value_max must be >= 1");
  }

  Rng rng(cfg.seed);
  BlkpInstance inst;
  const bool correlated = cfg.data_type == DataType::kCorrelated;
  auto draw = [&] { return rng.UniformInt(1, cfg.value_max); };

  // Draw order is part of the reproducibility contract: leader items first
  // (weight, then profit), then follower items (weight, d2, c), then alpha.
  for (int i = 0; i < cfg.n1; ++i) {
    const int64_t weight = draw();
    inst.a1.push_back(weight);
    inst.d1.push_back(correlated ? weight + 100 : draw());
  }
  for (int j = 0; j < cfg.n2; ++j) {
    const int64_t weight = draw();
    inst.a2.push_back(weight);
    inst.d2.push_back(draw());
    inst.c.push_back(correlated ? weight + 100 : draw());
  }
  const double alpha = cfg.alpha_lo == cfg.alpha_hi
                           ? cfg.alpha_lo
                           : rng.Uniform(cfg.alpha_lo, cfg.alpha_hi);
  inst.b = std::llround(alpha * static_cast<double>(inst.TotalWeight()));
  return inst;
}

void WriteInstance(const BlkpInstance& inst, std::ostream& out) {
  ValidateInstance(inst);
  json doc;
  doc["format"] = "blkp-instance";
  doc["version"] = kInstanceFormatVersion;
  doc["n1"] = inst.n1();
  doc["n2"] = inst.n2();
  doc["a1"] = inst.a1;
  doc["d1"] = inst.d1;
  doc["a2"] = inst.a2;
  doc["d2"] = inst.d2;
  doc["c"] = inst.c;
  doc["b"] = inst.b;
  out << doc.dump() << "\n";
}

BlkpInstance ReadInstance(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "blkp-instance") {
    throw Error(ErrorCode::kMalformedDocument,
                "not a blkp-instance document");
  }
  if (ReadInt(doc, "version") != kInstanceFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "unsupported instance version " +
                    std::to_string(ReadInt(doc, "version")));
  }
  const int64_t n1 = ReadInt(doc, "n1");
  const int64_t n2 = ReadInt(doc, "n2");
  if (n1 < 1 || n2 < 1) {
    throw Error(ErrorCode::kLengthMismatch, "n1 and n2 must be >= 1");
  }
  BlkpInstance inst;
  inst.a1 = ReadArray(doc, "a1");
  inst.d1 = ReadArray(doc, "d1");
  inst.a2 = ReadArray(doc, "a2");
  inst.d2 = ReadArray(doc, "d2");
  inst.c = ReadArray(doc, "c");
  inst.b = ReadInt(doc, "b");
  // Lengths are checked against the declared counts, not just each other.
  CheckArray(inst.a1, static_cast<int>(n1), "a1", "n1");
  CheckArray(inst.d1, static_cast<int>(n1), "d1", "n1");
  CheckArray(inst.a2, static_cast<int>(n2), "a2", "n2");
  CheckArray(inst.d2, static_cast<int>(n2), "d2", "n2");
  CheckArray(inst.c, static_cast<int>(n2), "c", "n2");
  ValidateInstance(inst);
  return inst;
}

void SaveInstance(const BlkpInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  WriteInstance(inst, out);
}

BlkpInstance LoadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ReadInstance(in);
}

}  // namespace blkp
