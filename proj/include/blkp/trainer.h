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

#ifndef BLKP_TRAINER_H_
#define BLKP_TRAINER_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "blkp/exact.h"
#include "blkp/instance.h"
#include "blkp/ndiff.h"
#include "blkp/pna.h"

namespace blkp {

struct TrainConfig {
  int epochs = 5000;
  int patience = 500;  // epochs without validation improvement before stop
  int batch_size = 64;  // samples per mini-batch; 0 = whole training set
  nd::AdamConfig adam;
  double split = 0.8;  // fraction of instances used for training
  uint64_t seed = 0;   // data split and shuffling
  uint64_t init_seed = 0;
  int labels_per_instance = 10;  // besides the optimum
};

void ValidateTrainConfig(const TrainConfig& cfg);

// One instance with its supervised targets for the leader variables.
struct LabeledInstance {
  std::string id;
  BlkpInstance instance;
  std::vector<BinaryVector> labels;  // first entry is the optimum
};

struct DatasetSplit {
  std::vector<LabeledInstance> train;
  std::vector<LabeledInstance> validation;

  int64_t TrainSamples() const;
  int64_t ValidationSamples() const;
};

// Shuffles instances with cfg.seed and splits at the instance level so all
// labels of one instance land on the same side. Each instance keeps at most
// 1 + cfg.labels_per_instance labels.
DatasetSplit BuildDataset(std::vector<LabeledInstance> data,
                          const TrainConfig& cfg);

struct EpochRecord {
  int epoch = 0;  // 0 = before the first update
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  Checkpoint best;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  double initial_val_loss = 0.0;
};

// Mean BCE over every leader variable of every (instance, label) sample.
double DatasetLoss(const std::vector<LabeledInstance>& data,
                   const ModelParams& params, const PnaConfig& model_cfg,
                   const NormalizationScheme& scheme);

// Mini-batch Adam on the mean BCE of each batch. The returned checkpoint is
// the one with the lowest validation loss seen (the training loss stands in
// when the validation side is empty). Throws kDivergence on a non-finite
// loss.
TrainResult Train(const DatasetSplit& data, const PnaConfig& model_cfg,
                  const TrainConfig& cfg,
                  const NormalizationScheme& scheme = {});

void WriteHistory(const std::vector<EpochRecord>& history, std::ostream& out);

// Label files are tab-separated rows "instance_id rank leader_value x",
// with x written as a string of 0/1 characters.
void WriteLabels(const std::string& id, const std::vector<Label>& labels,
                 std::ostream& out);
std::map<std::string, std::vector<Label>> ReadLabels(std::istream& in);

}  // namespace blkp

#endif  // BLKP_TRAINER_H_
