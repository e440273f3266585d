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

#include "blkp/trainer.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "blkp/error.h"
#include "blkp/rng.h"

namespace blkp {

namespace {

using nd::Tensor;

template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (size_t k = items.size(); k > 1; --k) {
    std::swap(items[k - 1],
              items[static_cast<size_t>(rng.UniformInt(0, k - 1))]);
  }
}

std::vector<double> ToDoubles(const BinaryVector& bits) {
  return {bits.begin(), bits.end()};
}

struct SampleRef {
  int instance;
  int label;
};

// Sum of BCE terms for a set of samples, forwarding each distinct instance
// once. Returns the loss tensor and the number of terms.
std::pair<Tensor, int64_t> BatchLossSum(
    const std::vector<LabeledInstance>& data, std::span<const SampleRef> batch,
    const ModelParams& params, const PnaConfig& model_cfg,
    const NormalizationScheme& scheme) {
  std::map<int, std::vector<int>> by_instance;
  for (const SampleRef& s : batch) by_instance[s.instance].push_back(s.label);
  Tensor total;
  int64_t terms = 0;
  for (const auto& [index, labels] : by_instance) {
    const LabeledInstance& item = data[index];
    const Tensor pred =
        ForwardTensor(item.instance, params, model_cfg, scheme);
    for (int label : labels) {
      const Tensor term = nd::BceSum(pred, ToDoubles(item.labels[label]));
      total = total.defined() ? nd::Add(total, term) : term;
      terms += item.instance.n1();
    }
  }
  return {total, terms};
}

std::vector<SampleRef> AllSamples(const std::vector<LabeledInstance>& data) {
  std::vector<SampleRef> samples;
  for (size_t i = 0; i < data.size(); ++i) {
    for (size_t l = 0; l < data[i].labels.size(); ++l) {
      samples.push_back({static_cast<int>(i), static_cast<int>(l)});
    }
  }
  return samples;
}

}  // namespace

void ValidateTrainConfig(const TrainConfig& cfg) {
  if (!(cfg.split > 0.0 && cfg.split < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "split must lie in (0, 1)");
  }
  if (cfg.epochs < 0 || cfg.patience < 0 || cfg.patience > cfg.epochs) {
    throw Error(ErrorCode::kInvalidConfig,
                "need 0 <= patience <= epochs");
  }
  if (cfg.batch_size < 0 || cfg.labels_per_instance < 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "batch size and label count must be non-negative");
  }
}

int64_t DatasetSplit::TrainSamples() const {
  int64_t n = 0;
  for (const auto& item : train) n += static_cast<int64_t>(item.labels.size());
  return n;
}

int64_t DatasetSplit::ValidationSamples() const {
  int64_t n = 0;
  for (const auto& item : validation) {
    n += static_cast<int64_t>(item.labels.size());
  }
  return n;
}

DatasetSplit BuildDataset(std::vector<LabeledInstance> data,
                          const TrainConfig& cfg) {
  ValidateTrainConfig(cfg);
  for (LabeledInstance& item : data) {
    if (item.labels.empty()) {
      throw Error(ErrorCode::kMissingLabels,
                  "instance '" + item.id + "' has no labels");
    }
    for (const BinaryVector& label : item.labels) {
      if (static_cast<int>(label.size()) != item.instance.n1()) {
        throw Error(ErrorCode::kLengthMismatch,
                    "label length differs from n1 for '" + item.id + "'");
      }
    }
    const size_t keep = static_cast<size_t>(cfg.labels_per_instance) + 1;
    if (item.labels.size() > keep) item.labels.resize(keep);
  }
  Rng rng(cfg.seed);
  Shuffle(data, rng);
  size_t train_count =
      static_cast<size_t>(std::llround(cfg.split * static_cast<double>(data.size())));
  train_count = std::clamp<size_t>(train_count, data.empty() ? 0 : 1,
                                   data.size());
  DatasetSplit split;
  for (size_t k = 0; k < data.size(); ++k) {
    (k < train_count ? split.train : split.validation)
        .push_back(std::move(data[k]));
  }
  return split;
}

double DatasetLoss(const std::vector<LabeledInstance>& data,
                   const ModelParams& params, const PnaConfig& model_cfg,
                   const NormalizationScheme& scheme) {
  const std::vector<SampleRef> samples = AllSamples(data);
  if (samples.empty()) return 0.0;
  const auto [sum, terms] =
      BatchLossSum(data, samples, params, model_cfg, scheme);
  return sum.item() / static_cast<double>(terms);
}

TrainResult Train(const DatasetSplit& data, const PnaConfig& model_cfg,
                  const TrainConfig& cfg, const NormalizationScheme& scheme) {
  ValidateTrainConfig(cfg);
  ValidatePnaConfig(model_cfg);
  if (data.train.empty()) {
    throw Error(ErrorCode::kMissingLabels, "empty training set");
  }
  ModelParams params = ModelParams::Initialize(model_cfg, cfg.init_seed);
  nd::Adam adam(params.Parameters(), cfg.adam);
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  const bool has_validation = !data.validation.empty();
  auto validation_loss = [&](double train_loss) {
    return has_validation
               ? DatasetLoss(data.validation, params, model_cfg, scheme)
               : train_loss;
  };
  auto check_finite = [](double loss, int epoch) {
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergence,
                  "non-finite loss at epoch " + std::to_string(epoch));
    }
  };

  TrainResult result;
  const double init_train = DatasetLoss(data.train, params, model_cfg, scheme);
  const double init_val = validation_loss(init_train);
  check_finite(init_val, 0);
  result.history.push_back({0, init_train, init_val});
  result.initial_val_loss = init_val;
  result.best_val_loss = init_val;
  result.best = {model_cfg, scheme, params.Clone(), {}};

  std::vector<SampleRef> samples = AllSamples(data.train);
  const size_t batch = cfg.batch_size == 0
                           ? samples.size()
                           : static_cast<size_t>(cfg.batch_size);
  int since_improvement = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Shuffle(samples, rng);
    double loss_sum = 0.0;
    int64_t term_sum = 0;
    for (size_t start = 0; start < samples.size(); start += batch) {
      const size_t len = std::min(batch, samples.size() - start);
      auto [sum, terms] =
          BatchLossSum(data.train, std::span(samples).subspan(start, len),
                       params, model_cfg, scheme);
      check_finite(sum.item(), epoch);
      loss_sum += sum.item();
      term_sum += terms;
      const Tensor loss = nd::Scale(sum, 1.0 / static_cast<double>(terms));
      adam.ZeroGrad();
      nd::Backward(loss);
      adam.Step();
    }
    const double train_loss = loss_sum / static_cast<double>(term_sum);
    const double val_loss = validation_loss(train_loss);
    check_finite(val_loss, epoch);
    result.history.push_back({epoch, train_loss, val_loss});
    if (val_loss < result.best_val_loss) {
      result.best_val_loss = val_loss;
      result.best_epoch = epoch;
      result.best.params = params.Clone();
      since_improvement = 0;
    } else if (++since_improvement > cfg.patience) {
      break;
    }
  }
  result.best.metadata["best_epoch"] = std::to_string(result.best_epoch);
  std::ostringstream best_loss;
  best_loss << std::setprecision(17) << result.best_val_loss;
  result.best.metadata["best_val_loss"] = best_loss.str();
  result.best.metadata["train_seed"] = std::to_string(cfg.seed);
  result.best.metadata["init_seed"] = std::to_string(cfg.init_seed);
  return result;
}

void WriteHistory(const std::vector<EpochRecord>& history, std::ostream& out) {
  out << "epoch\ttrain_loss\tval_loss\n";
  out << std::setprecision(10);
  for (const EpochRecord& r : history) {
    out << r.epoch << '\t' << r.train_loss << '\t' << r.val_loss << '\n';
  }
}

void WriteLabels(const std::string& id, const std::vector<Label>& labels,
                 std::ostream& out) {
  for (size_t rank = 0; rank < labels.size(); ++rank) {
    out << id << '\t' << rank << '\t' << labels[rank].leader_value << '\t';
    for (uint8_t bit : labels[rank].x) out << (bit ? '1' : '0');
    out << '\n';
  }
}

std::map<std::string, std::vector<Label>> ReadLabels(std::istream& in) {
  std::map<std::string, std::vector<Label>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string id, bits;
    int rank = 0;
    Label label;
    if (!(row >> id >> rank >> label.leader_value >> bits)) {
      throw Error(ErrorCode::kMalformedDocument,
                  "label line " + std::to_string(line_no));
    }
    for (char ch : bits) {
      if (ch != '0' && ch != '1') {
        throw Error(ErrorCode::kMalformedDocument,
                    "bad bit in label line " + std::to_string(line_no));
      }
      label.x.push_back(ch == '1');
    }
    out[id].push_back(std::move(label));
  }
  return out;
}

}  // namespace blkp
