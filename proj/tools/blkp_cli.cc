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

// Command-line front end: generate | exact | label | train | solve | bench.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blkp/bench.h"
#include "blkp/error.h"
#include "blkp/exact.h"
#include "blkp/instance.h"
#include "blkp/pna.h"
#include "blkp/rng.h"
#include "blkp/search.h"
#include "blkp/trainer.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace blkp {
namespace {

constexpr const char* kExactSuffix = ".exact.json";

struct Common {
  uint64_t seed = 0;
  std::string out;
  std::string format = "tsv";
};

void AddCommon(CLI::App* cmd, Common& common, const std::string& out_help) {
  cmd->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  cmd->add_option("--out", common.out, out_help);
  cmd->add_option("--format", common.format, "Summary format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string InstanceId(const fs::path& path) { return path.stem().string(); }

// Instance files given directly or found (*.json, not exact records) in a
// directory, sorted by path.
std::vector<fs::path> InstancePaths(const std::string& input) {
  std::vector<fs::path> paths;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && EndsWith(name, ".json") &&
          !EndsWith(name, kExactSuffix)) {
        paths.push_back(entry.path());
      }
    }
    std::sort(paths.begin(), paths.end());
  } else if (fs::is_regular_file(input)) {
    paths.push_back(input);
  } else {
    throw Error(ErrorCode::kIo, "no such file or directory: " + input);
  }
  if (paths.empty()) {
    throw Error(ErrorCode::kIo, "no instance files in " + input);
  }
  return paths;
}

fs::path ExactPath(const std::string& dir, const std::string& id) {
  return fs::path(dir) / (id + kExactSuffix);
}

std::optional<ExactRecord> LoadExactIfPresent(const std::string& dir,
                                              const std::string& id,
                                              Mode mode) {
  if (dir.empty()) return std::nullopt;
  const fs::path path = ExactPath(dir, id);
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path);
  ExactRecord record = ReadExactRecord(in);
  if (record.mode != mode) return std::nullopt;
  return record;
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::kIo, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void PrintTable(const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows,
                const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json obj;
      for (size_t k = 0; k < header.size(); ++k) obj[header[k]] = row[k];
      doc.push_back(obj);
    }
    out << doc.dump(2) << "\n";
    return;
  }
  for (size_t k = 0; k < header.size(); ++k) {
    out << (k ? "\t" : "") << header[k];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (size_t k = 0; k < row.size(); ++k) out << (k ? "\t" : "") << row[k];
    out << "\n";
  }
}

std::string Bits(const BinaryVector& v) {
  std::string s;
  for (uint8_t b : v) s.push_back(b ? '1' : '0');
  return s;
}

std::string Fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
  Common common;
  int n1 = 10, n2 = 10, count = 1;
  std::string type = "UC";
  double alpha_lo = 0.5, alpha_hi = 0.75;
  int64_t value_max = 1000;
};

int RunGenerate(const GenerateArgs& a) {
  if (a.common.out.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "generate needs --out DIR");
  }
  fs::create_directories(a.common.out);
  GenConfig cfg;
  cfg.n1 = a.n1;
  cfg.n2 = a.n2;
  cfg.data_type = ParseDataType(a.type);
  cfg.alpha_lo = a.alpha_lo;
  cfg.alpha_hi = a.alpha_hi;
  cfg.value_max = a.value_max;
  std::vector<std::vector<std::string>> rows;
  for (int k = 0; k < a.count; ++k) {
    cfg.seed = MixSeed(a.common.seed, static_cast<uint64_t>(k));
    const BlkpInstance inst = Generate(cfg);
    std::ostringstream name;
    name << DataTypeName(cfg.data_type) << "_" << a.n1 << "x" << a.n2 << "_"
         << std::setw(4) << std::setfill('0') << k << ".json";
    const fs::path path = fs::path(a.common.out) / name.str();
    SaveInstance(inst, path.string());
    rows.push_back({InstanceId(path), std::to_string(cfg.seed),
                    std::to_string(inst.b), path.string()});
  }
  PrintTable({"id", "seed", "b", "path"}, rows, a.common.format, std::cout);
  return 0;
}

// --- exact ------------------------------------------------------------------

struct ExactArgs {
  Common common;
  std::string input;
  std::string mode = "optimistic";
  int64_t max_nodes = 0;
  double time_budget = 0.0;
  int pool_size = 11;
};

int RunExact(const ExactArgs& a) {
  const Mode mode = ParseMode(a.mode);
  ExactLimits limits;
  limits.max_nodes = a.max_nodes;
  limits.time_budget_s = a.time_budget;
  limits.pool_size = a.pool_size;
  if (!a.common.out.empty()) fs::create_directories(a.common.out);
  std::vector<std::vector<std::string>> rows;
  for (const fs::path& path : InstancePaths(a.input)) {
    const ExactRecord record{InstanceId(path), mode,
                             SolveExact(LoadInstance(path.string()), mode, limits)};
    if (!a.common.out.empty()) {
      std::ofstream out(ExactPath(a.common.out, record.id));
      WriteExactRecord(record, out);
    }
    const ExactResult& r = record.result;
    rows.push_back({record.id, std::to_string(r.opt_value), Bits(r.opt_x),
                    r.proven_optimal ? "1" : "0", std::to_string(r.node_count),
                    std::to_string(r.pool.size()), Fixed(r.elapsed_s)});
  }
  PrintTable({"id", "opt_value", "opt_x", "proven_optimal", "nodes",
              "pool", "time_s"},
             rows, a.common.format, std::cout);
  return 0;
}

// --- label ------------------------------------------------------------------

struct LabelArgs {
  Common common;
  std::string input;
  std::string exact_dir;
  std::string mode = "optimistic";
  int k = 10;
};

int RunLabel(const LabelArgs& a) {
  const Mode mode = ParseMode(a.mode);
  Sink sink(a.common.out);
  std::ostream& out = sink.stream();
  out << "# labels: optimum plus best " << a.k
      << " distinct feasible leader vectors, mode " << ModeName(mode) << "\n";
  for (const fs::path& path : InstancePaths(a.input)) {
    const std::string id = InstanceId(path);
    ExactResult result;
    if (auto record = LoadExactIfPresent(a.exact_dir, id, mode)) {
      result = std::move(record->result);
    } else {
      ExactLimits limits;
      limits.pool_size = a.k + 1;
      result = SolveExact(LoadInstance(path.string()), mode, limits);
    }
    WriteLabels(id, CollectLabels(result, a.k), out);
  }
  return 0;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  Common common;
  std::string instances;
  std::string labels;
  std::string history;
  TrainConfig train;
  PnaConfig model;
  double alpha = 0.7;
  std::vector<std::string> aggregators = {"mean", "max", "min"};
};

int RunTrain(TrainArgs a) {
  if (a.common.out.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "train needs --out CHECKPOINT");
  }
  a.train.seed = a.common.seed;
  a.train.init_seed = a.common.seed;
  a.model.scalers = DefaultScalers(a.alpha);
  a.model.aggregators.clear();
  for (const auto& name : a.aggregators) {
    a.model.aggregators.push_back(ParseAggregator(name));
  }
  std::ifstream label_file(a.labels);
  if (!label_file) throw Error(ErrorCode::kIo, "cannot open " + a.labels);
  const auto labels = ReadLabels(label_file);

  std::vector<LabeledInstance> data;
  for (const fs::path& path : InstancePaths(a.instances)) {
    LabeledInstance item{InstanceId(path), LoadInstance(path.string()), {}};
    const auto it = labels.find(item.id);
    if (it == labels.end()) {
      throw Error(ErrorCode::kMissingLabels,
                  "no labels for instance '" + item.id + "' in " + a.labels);
    }
    for (const Label& l : it->second) item.labels.push_back(l.x);
    data.push_back(std::move(item));
  }
  const DatasetSplit split = BuildDataset(std::move(data), a.train);
  TrainResult result = Train(split, a.model, a.train);
  result.best.metadata["train_instances"] = std::to_string(split.train.size());
  result.best.metadata["validation_instances"] =
      std::to_string(split.validation.size());
  result.best.metadata["label_source"] = a.labels;
  SaveCheckpointFile(result.best, a.common.out);
  if (!a.history.empty()) {
    std::ofstream h(a.history);
    WriteHistory(result.history, h);
  }
  PrintTable({"checkpoint", "epochs_run", "best_epoch", "initial_val_loss",
              "best_val_loss"},
             {{a.common.out, std::to_string(result.history.size() - 1),
               std::to_string(result.best_epoch),
               Fixed(result.initial_val_loss), Fixed(result.best_val_loss)}},
             a.common.format, std::cout);
  return 0;
}

// --- solve ------------------------------------------------------------------

struct SolveArgs {
  Common common;
  std::string instance;
  std::string checkpoint;
  double theta = 0.2;
  int samples = 10;
  std::string mode = "optimistic";
  bool no_sampling = false;
};

int RunSolve(const SolveArgs& a) {
  const BlkpInstance inst = LoadInstance(a.instance);
  const Checkpoint ckpt = LoadCheckpointFile(a.checkpoint);
  SearchConfig cfg;
  cfg.theta = a.no_sampling ? 0.5 : a.theta;
  cfg.samples = a.samples;
  cfg.mode = ParseMode(a.mode);
  cfg.seed = a.common.seed;
  cfg.deterministic_rounding = a.no_sampling;
  const SearchResult r = SolveHeuristic(inst, ckpt, cfg);
  Sink sink(a.common.out);
  PrintTable({"id", "best_value", "best_x", "best_y", "samples",
              "infeasible", "distinct_x", "time_s"},
             {{InstanceId(a.instance), std::to_string(r.best_value),
               Bits(r.best_x), Bits(r.best_y),
               std::to_string(r.samples_evaluated),
               std::to_string(r.samples_infeasible),
               std::to_string(r.distinct_x_count), Fixed(r.elapsed_s)}},
             a.common.format, sink.stream());
  return 0;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  Common common;
  std::string instances;
  std::string exact_dir;
  std::string checkpoint;
  std::string mode = "optimistic";
  std::vector<std::string> methods = {"no_sampling", "sampling:0.2:10",
                                      "exact"};
};

BenchMethod ParseMethod(const std::string& text) {
  BenchMethod m;
  if (text == "no_sampling") {
    m.kind = BenchMethod::Kind::kNoSampling;
    return m;
  }
  if (text == "exact") {
    m.kind = BenchMethod::Kind::kExact;
    return m;
  }
  char theta_sep = 0, n_sep = 0;
  std::istringstream in(text.substr(std::min(text.size(), size_t{8})));
  if (text.rfind("sampling", 0) == 0 && in >> theta_sep >> m.theta >> n_sep >> m.samples &&
      theta_sep == ':' && n_sep == ':' && in.peek() == EOF) {
    m.kind = BenchMethod::Kind::kSampling;
    return m;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "method '" + text +
                  "' is not no_sampling, exact or sampling:THETA:N");
}

int RunBenchCommand(const BenchArgs& a) {
  BenchConfig cfg;
  cfg.mode = ParseMode(a.mode);
  cfg.seed = a.common.seed;
  for (const auto& m : a.methods) cfg.methods.push_back(ParseMethod(m));
  const Checkpoint ckpt = LoadCheckpointFile(a.checkpoint);
  std::vector<BenchInstance> items;
  for (const fs::path& path : InstancePaths(a.instances)) {
    BenchInstance item{InstanceId(path), LoadInstance(path.string()), {}, 0.0};
    if (auto record = LoadExactIfPresent(a.exact_dir, item.id, cfg.mode)) {
      item.exact_value = record->result.opt_value;
      item.exact_time_s = record->result.elapsed_s;
    }
    items.push_back(std::move(item));
  }
  const BenchReport report = RunBench(std::move(items), ckpt, cfg);
  Sink sink(a.common.out);
  if (a.common.format == "json") {
    WriteReportJson(report, sink.stream());
  } else {
    WriteReportTsv(report, sink.stream());
  }
  return 0;
}

}  // namespace
}  // namespace blkp

int main(int argc, char** argv) {
  using namespace blkp;
  CLI::App app{"Bilevel knapsack toolkit: exact oracle, GNN training and "
               "sampling search"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write random instances");
  AddCommon(g, gen.common, "Output directory");
  g->add_option("--n1", gen.n1, "Leader items")->capture_default_str();
  g->add_option("--n2", gen.n2, "Follower items")->capture_default_str();
  g->add_option("--type", gen.type, "UC or C")
      ->check(CLI::IsMember({"UC", "C"}))
      ->capture_default_str();
  g->add_option("--count", gen.count, "Number of instances")
      ->capture_default_str();
  g->add_option("--alpha-lo", gen.alpha_lo, "Capacity ratio lower end")
      ->capture_default_str();
  g->add_option("--alpha-hi", gen.alpha_hi, "Capacity ratio upper end")
      ->capture_default_str();
  g->add_option("--value-max", gen.value_max, "Largest coefficient")
      ->capture_default_str();

  ExactArgs ex;
  auto* e = app.add_subcommand("exact", "Solve instances exactly");
  AddCommon(e, ex.common, "Directory for <id>.exact.json records");
  e->add_option("--in", ex.input, "Instance file or directory")->required();
  e->add_option("--mode", ex.mode, "optimistic or pessimistic")
      ->capture_default_str();
  e->add_option("--max-nodes", ex.max_nodes, "Node limit, 0 = none")
      ->capture_default_str();
  e->add_option("--time-budget", ex.time_budget, "Seconds, 0 = none")
      ->capture_default_str();
  e->add_option("--pool-size", ex.pool_size, "Solutions kept in the pool")
      ->capture_default_str();

  LabelArgs lab;
  auto* l = app.add_subcommand("label", "Write training labels");
  AddCommon(l, lab.common, "Label file (stdout if omitted)");
  l->add_option("--in", lab.input, "Instance file or directory")->required();
  l->add_option("--exact-dir", lab.exact_dir, "Reuse exact records from here");
  l->add_option("--mode", lab.mode, "optimistic or pessimistic")
      ->capture_default_str();
  l->add_option("--k", lab.k, "Feasible solutions besides the optimum")
      ->capture_default_str();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train the network");
  AddCommon(t, tr.common, "Checkpoint path");
  t->add_option("--instances", tr.instances, "Instance directory")->required();
  t->add_option("--labels", tr.labels, "Label file")->required();
  t->add_option("--history", tr.history, "Per-epoch loss log (TSV)");
  t->add_option("--epochs", tr.train.epochs)->capture_default_str();
  t->add_option("--patience", tr.train.patience)->capture_default_str();
  t->add_option("--batch-size", tr.train.batch_size, "Samples, 0 = all")
      ->capture_default_str();
  t->add_option("--lr", tr.train.adam.learning_rate)->capture_default_str();
  t->add_option("--weight-decay", tr.train.adam.weight_decay)
      ->capture_default_str();
  t->add_option("--split", tr.train.split, "Training fraction")
      ->capture_default_str();
  t->add_option("--labels-per-instance", tr.train.labels_per_instance)
      ->capture_default_str();
  t->add_option("--embed-dim", tr.model.embed_dim)->capture_default_str();
  t->add_option("--msg-dim", tr.model.msg_dim)->capture_default_str();
  t->add_option("--hidden-dim", tr.model.hidden_dim)->capture_default_str();
  t->add_option("--iterations", tr.model.iterations)->capture_default_str();
  t->add_option("--alpha", tr.alpha, "PNA scaler constant")
      ->capture_default_str();
  t->add_option("--aggregators", tr.aggregators)
      ->delimiter(',')
      ->capture_default_str();

  SolveArgs so;
  auto* s = app.add_subcommand("solve", "Heuristic solve of one instance");
  AddCommon(s, so.common, "Result file (stdout if omitted)");
  s->add_option("--instance", so.instance)->required();
  s->add_option("--checkpoint", so.checkpoint)->required();
  s->add_option("--theta", so.theta)->capture_default_str();
  s->add_option("--samples", so.samples)->capture_default_str();
  s->add_option("--mode", so.mode)->capture_default_str();
  s->add_flag("--no-sampling", so.no_sampling,
              "Round at 0.5 once instead of sampling");

  BenchArgs be;
  auto* b = app.add_subcommand("bench", "Gap and runtime report");
  AddCommon(b, be.common, "Report file (stdout if omitted)");
  b->add_option("--instances", be.instances)->required();
  b->add_option("--exact-dir", be.exact_dir, "Reuse exact records from here");
  b->add_option("--checkpoint", be.checkpoint)->required();
  b->add_option("--mode", be.mode)->capture_default_str();
  b->add_option("--methods", be.methods,
                "no_sampling, exact, sampling:THETA:N")
      ->delimiter(',')
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*g) return RunGenerate(gen);
    if (*e) return RunExact(ex);
    if (*l) return RunLabel(lab);
    if (*t) return RunTrain(tr);
    if (*s) return RunSolve(so);
    if (*b) return RunBenchCommand(be);
  } catch (const blkp::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 1;
}
