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

#include "blkp/exact.h"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "blkp/error.h"
#include "json.hpp"

namespace blkp {

namespace {

struct Item {
  int64_t profit;
  int64_t weight;
  int leader_pos;  // position in branch order, or -1 for follower items
};

// Sort by profit/weight descending via cross multiplication; ties keep the
// original order.
void SortByRatio(std::vector<Item>& items) {
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& l, const Item& r) {
                     return l.profit * r.weight > r.profit * l.weight;
                   });
}

// Floor of the fractional knapsack value over items in ratio order; items
// with leader_pos < first_free_leader are skipped as already decided.
int64_t FractionalBound(const std::vector<Item>& sorted, int first_free_leader,
                        int64_t capacity) {
  int64_t value = 0;
  for (const Item& item : sorted) {
    if (item.leader_pos >= 0 && item.leader_pos < first_free_leader) continue;
    if (item.weight <= capacity) {
      value += item.profit;
      capacity -= item.weight;
    } else {
      value += item.profit * capacity / item.weight;
      break;
    }
  }
  return value;
}

class BranchAndBound {
 public:
  BranchAndBound(const BlkpInstance& inst, Mode mode, const ExactLimits& limits)
      : inst_(inst),
        mode_(mode),
        limits_(limits),
        pool_size_(std::max(limits.pool_size, 1)),
        table_(BuildResponseTable(inst, mode)) {
    order_.resize(inst.n1());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int l, int r) {
      return inst.d1[l] * inst.a1[r] > inst.d1[r] * inst.a1[l];
    });
    for (int pos = 0; pos < inst.n1(); ++pos) {
      const int i = order_[pos];
      leader_items_.push_back({inst.d1[i], inst.a1[i], pos});
      all_items_.push_back({inst.d1[i], inst.a1[i], pos});
    }
    for (int j = 0; j < inst.n2(); ++j) {
      all_items_.push_back({inst.d2[j], inst.a2[j], -1});
    }
    SortByRatio(leader_items_);
    SortByRatio(all_items_);

    best_d2_upto_.resize(table_.d2_value.size());
    int64_t running = 0;
    for (size_t r = 0; r < table_.d2_value.size(); ++r) {
      running = std::max(running, table_.d2_value[r]);
      best_d2_upto_[r] = running;
    }
    x_.assign(inst.n1(), 0);
  }

  ExactResult Run() {
    const auto start = std::chrono::steady_clock::now();
    start_ = start;
    Visit(0, 0, inst_.b);

    ExactResult result;
    if (pool_.empty()) {
      // Only reachable when a limit stops the search before any leaf.
      Record(BinaryVector(inst_.n1(), 0), table_.d2_value[inst_.b]);
    }
    for (const Candidate& cand : pool_) {
      FollowerResponse response = FollowerRespond(inst_, cand.x, mode_);
      result.pool.push_back({cand.x, std::move(response.y),
                             response.leader_value});
    }
    result.opt_x = result.pool.front().x;
    result.opt_y = result.pool.front().y;
    result.opt_value = result.pool.front().leader_value;
    result.node_count = nodes_;
    result.proven_optimal = !stopped_;
    result.incumbent_trace = std::move(trace_);
    result.elapsed_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    return result;
  }

 private:
  struct Candidate {
    BinaryVector x;
    int64_t value;
  };

  bool LimitHit() {
    if (stopped_) return true;
    if (limits_.max_nodes > 0 && nodes_ >= limits_.max_nodes) {
      stopped_ = true;
    } else if (limits_.time_budget_s > 0.0 && (nodes_ & 1023) == 0) {
      const double elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start_)
                                 .count();
      stopped_ = elapsed > limits_.time_budget_s;
    }
    return stopped_;
  }

  // Entries strictly better than this may still enter the pool.
  bool Prunable(int64_t bound) const {
    return static_cast<int>(pool_.size()) == pool_size_ &&
           bound <= pool_.back().value;
  }

  void Record(const BinaryVector& x, int64_t value) {
    if (Prunable(value)) return;
    auto pos = std::upper_bound(
        pool_.begin(), pool_.end(), value,
        [](int64_t v, const Candidate& c) { return v > c.value; });
    const bool improves = pool_.empty() || value > pool_.front().value;
    pool_.insert(pos, Candidate{x, value});
    if (static_cast<int>(pool_.size()) > pool_size_) pool_.pop_back();
    if (improves) trace_.push_back(value);
  }

  void Visit(int pos, int64_t profit, int64_t residual) {
    if (LimitHit()) return;
    ++nodes_;
    if (pos == inst_.n1()) {
      Record(x_, profit + table_.d2_value[residual]);
      return;
    }
    const int64_t hpr = FractionalBound(all_items_, pos, residual);
    const int64_t split = FractionalBound(leader_items_, pos, residual) +
                          best_d2_upto_[residual];
    if (Prunable(profit + std::min(hpr, split))) return;

    const int i = order_[pos];
    if (inst_.a1[i] <= residual) {
      x_[i] = 1;
      Visit(pos + 1, profit + inst_.d1[i], residual - inst_.a1[i]);
      x_[i] = 0;
    }
    Visit(pos + 1, profit, residual);
  }

  const BlkpInstance& inst_;
  const Mode mode_;
  const ExactLimits limits_;
  const int pool_size_;
  const ResponseTable table_;
  std::vector<int> order_;
  std::vector<Item> leader_items_;
  std::vector<Item> all_items_;
  std::vector<int64_t> best_d2_upto_;
  BinaryVector x_;
  std::vector<Candidate> pool_;
  std::vector<int64_t> trace_;
  int64_t nodes_ = 0;
  bool stopped_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

ExactResult SolveExact(const BlkpInstance& inst, Mode mode,
                       const ExactLimits& limits) {
  ValidateInstance(inst);
  return BranchAndBound(inst, mode, limits).Run();
}

int64_t HighPointBound(const BlkpInstance& inst) {
  std::vector<Item> items;
  for (int i = 0; i < inst.n1(); ++i) items.push_back({inst.d1[i], inst.a1[i], -1});
  for (int j = 0; j < inst.n2(); ++j) items.push_back({inst.d2[j], inst.a2[j], -1});
  SortByRatio(items);
  return FractionalBound(items, 0, inst.b);
}

std::vector<Label> CollectLabels(const ExactResult& result, int k) {
  if (result.pool.empty()) {
    throw Error(ErrorCode::kMissingLabels, "exact result has an empty pool");
  }
  std::vector<Label> labels;
  const size_t count =
      std::min(result.pool.size(), static_cast<size_t>(std::max(k, 0)) + 1);
  for (size_t e = 0; e < count; ++e) {
    labels.push_back({result.pool[e].x, result.pool[e].leader_value});
  }
  return labels;
}

void WriteExactRecord(const ExactRecord& record, std::ostream& out) {
  const ExactResult& r = record.result;
  nlohmann::json doc;
  doc["format"] = "blkp-exact";
  doc["version"] = 1;
  doc["id"] = record.id;
  doc["mode"] = ModeName(record.mode);
  doc["opt_value"] = r.opt_value;
  doc["opt_x"] = r.opt_x;
  doc["opt_y"] = r.opt_y;
  doc["proven_optimal"] = r.proven_optimal;
  doc["node_count"] = r.node_count;
  doc["elapsed_s"] = r.elapsed_s;
  doc["pool"] = nlohmann::json::array();
  for (const PoolEntry& e : r.pool) {
    doc["pool"].push_back(
        {{"x", e.x}, {"y", e.y}, {"leader_value", e.leader_value}});
  }
  out << doc.dump() << "\n";
}

ExactRecord ReadExactRecord(std::istream& in) {
  ExactRecord record;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.at("format").get<std::string>() != "blkp-exact") {
      throw Error(ErrorCode::kMalformedDocument, "not a blkp-exact record");
    }
    record.id = doc.at("id").get<std::string>();
    record.mode = ParseMode(doc.at("mode").get<std::string>());
    ExactResult& r = record.result;
    r.opt_value = doc.at("opt_value").get<int64_t>();
    r.opt_x = doc.at("opt_x").get<BinaryVector>();
    r.opt_y = doc.at("opt_y").get<BinaryVector>();
    r.proven_optimal = doc.at("proven_optimal").get<bool>();
    r.node_count = doc.at("node_count").get<int64_t>();
    r.elapsed_s = doc.at("elapsed_s").get<double>();
    for (const auto& e : doc.at("pool")) {
      r.pool.push_back({e.at("x").get<BinaryVector>(),
                        e.at("y").get<BinaryVector>(),
                        e.at("leader_value").get<int64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  return record;
}

}  // namespace blkp
