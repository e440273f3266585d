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

#ifndef BLKP_PNA_H_
#define BLKP_PNA_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "blkp/graph.h"
#include "blkp/instance.h"
#include "blkp/ndiff.h"

namespace blkp {

enum class Aggregator { kMean, kMax, kMin, kStd };

const char* AggregatorName(Aggregator agg);
Aggregator ParseAggregator(const std::string& name);

// Scaler triple [1, alpha, 1/alpha]: identity, amplification, attenuation.
std::vector<double> DefaultScalers(double alpha);

struct PnaConfig {
  int embed_dim = 16;
  int msg_dim = 16;
  int hidden_dim = 16;  // single hidden layer of every message/update MLP
  std::vector<Aggregator> aggregators = {Aggregator::kMean, Aggregator::kMax,
                                         Aggregator::kMin};
  std::vector<double> scalers = DefaultScalers(0.7);
  int iterations = 2;             // message-passing rounds, weights shared
  int decoder_hidden_layers = 3;  // plus one sigmoid output neuron
  int decoder_width = 16;
  double leaky_slope = 0.01;

  int AggregatedWidth() const {
    return static_cast<int>(aggregators.size() * scalers.size()) * msg_dim;
  }

  bool operator==(const PnaConfig&) const = default;
};

// Throws kInvalidConfig on empty aggregator/scaler lists or bad widths.
void ValidatePnaConfig(const PnaConfig& cfg);

// Learnable networks. "msg" MLPs map an (own, neighbour) feature pair to a
// message; "upd" MLPs map own features plus the aggregated messages to the
// next embedding. Encoding networks see raw features, message-passing
// networks see embeddings and are reused on every iteration.
struct ModelParams {
  nd::Mlp enc_leader_msg;     // (a1, d1, a2, d2, c) -> msg
  nd::Mlp enc_leader_upd;     // (a1, d1, b, agg) -> embed
  nd::Mlp enc_follower_msg;   // (a2, d2, c, a1, d1) -> msg
  nd::Mlp enc_follower_upd;   // (a2, d2, c, b, agg) -> embed
  nd::Mlp mp_leader_msg;      // (X_i, Y_j) -> msg
  nd::Mlp mp_leader_upd;      // (X_i, agg) -> embed
  nd::Mlp mp_follower_msg;    // (Y_j, X_i) -> msg
  nd::Mlp mp_follower_upd;    // (Y_j, agg) -> embed
  nd::Mlp decoder;            // X_i -> P(x_i = 1)

  static ModelParams Initialize(const PnaConfig& cfg, uint64_t seed);

  // Fixed order used by the optimizer and the checkpoint format.
  std::vector<const nd::Mlp*> Networks() const;
  std::vector<nd::Mlp*> Networks();
  std::vector<nd::Tensor> Parameters() const;
  int64_t ParameterCount() const;
  // Deep copy; plain copies share weight storage.
  ModelParams Clone() const;
};

inline constexpr const char* kNetworkNames[] = {
    "enc_leader_msg", "enc_leader_upd", "enc_follower_msg",
    "enc_follower_upd", "mp_leader_msg", "mp_leader_upd",
    "mp_follower_msg", "mp_follower_upd", "decoder"};

// Layer widths each network must have under cfg.
std::vector<std::vector<int>> ExpectedDims(const PnaConfig& cfg);

// Messages are grouped in consecutive blocks of group_size rows; one output
// row per block. Column order is scaler-major: for the default config
// [mean, max, min, a*mean, a*max, a*min, mean/a, max/a, min/a], each block
// msg_dim wide.
nd::Tensor PnaAggregate(const nd::Tensor& messages, int group_size,
                        const PnaConfig& cfg);

struct NodeEmbeddings {
  nd::Tensor leader;    // (n1, embed_dim)
  nd::Tensor follower;  // (n2, embed_dim)
  int iteration = 0;
};

NodeEmbeddings Encode(const TripartiteGraph& graph, const ModelParams& params,
                      const PnaConfig& cfg);
// One synchronous round: both groups read the embeddings of round t.
NodeEmbeddings MessagePass(const NodeEmbeddings& emb, const ModelParams& params,
                           const PnaConfig& cfg);
NodeEmbeddings MessagePass(const NodeEmbeddings& emb, const ModelParams& params,
                           const PnaConfig& cfg, int rounds);
nd::Tensor Decode(const NodeEmbeddings& emb, const ModelParams& params);

// Final values as an (n1, 1) tensor connected to the parameters.
nd::Tensor ForwardTensor(const BlkpInstance& inst, const ModelParams& params,
                         const PnaConfig& cfg,
                         const NormalizationScheme& scheme = {});
std::vector<double> Forward(const BlkpInstance& inst, const ModelParams& params,
                            const PnaConfig& cfg,
                            const NormalizationScheme& scheme = {});

struct Checkpoint {
  PnaConfig config;
  NormalizationScheme scheme;
  ModelParams params;
  std::map<std::string, std::string> metadata;
};

// JSON document; every double is stored as a C99 hexadecimal float string
// so weights round-trip bit for bit.
inline constexpr int kCheckpointFormatVersion = 1;

void SaveCheckpoint(const Checkpoint& ckpt, std::ostream& out);
// With expected != nullptr the stored config must equal *expected.
Checkpoint LoadCheckpoint(std::istream& in,
                          const PnaConfig* expected = nullptr);
void SaveCheckpointFile(const Checkpoint& ckpt, const std::string& path);
Checkpoint LoadCheckpointFile(const std::string& path,
                              const PnaConfig* expected = nullptr);

}  // namespace blkp

#endif  // BLKP_PNA_H_
