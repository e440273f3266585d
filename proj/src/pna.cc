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

#include "blkp/pna.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "blkp/error.h"
#include "json.hpp"

namespace blkp {

namespace {

using nd::Activation;
using nd::Mlp;
using nd::Tensor;
using nlohmann::json;

std::string HexDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double ParseHexDouble(const json& v) {
  if (!v.is_string()) {
    throw Error(ErrorCode::kCorruptCheckpoint, "expected hex float string");
  }
  const std::string s = v.get<std::string>();
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::kCorruptCheckpoint, "bad float '" + s + "'");
  }
  return out;
}

// Leaky hidden units everywhere: with plain ReLU a fully inactive hidden row
// maps distinct items to the same embedding (the output bias), which the
// optimizer cannot recover from.
Activation HiddenActivation(int) { return Activation::kLeakyRelu; }

Activation OutputActivation(int net) {
  return net == 8 ? Activation::kSigmoid : Activation::kIdentity;
}

Tensor Column(int rows, double value) {
  return Tensor::Constant(rows, 1, std::vector<double>(rows, value));
}

Tensor Concat(std::initializer_list<Tensor> parts) {
  return nd::ConcatCols(std::span<const Tensor>(parts.begin(), parts.size()));
}

void CheckWidth(const Tensor& t, int cols, const char* what) {
  if (t.cols() != cols) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " has width " + std::to_string(t.cols()) +
                    ", expected " + std::to_string(cols));
  }
}

}  // namespace

const char* AggregatorName(Aggregator agg) {
  switch (agg) {
    case Aggregator::kMean:
      return "mean";
    case Aggregator::kMax:
      return "max";
    case Aggregator::kMin:
      return "min";
    case Aggregator::kStd:
      return "std";
  }
  return "?";
}

Aggregator ParseAggregator(const std::string& name) {
  if (name == "mean") return Aggregator::kMean;
  if (name == "max") return Aggregator::kMax;
  if (name == "min") return Aggregator::kMin;
  if (name == "std") return Aggregator::kStd;
  throw Error(ErrorCode::kInvalidConfig, "unknown aggregator '" + name + "'");
}

std::vector<double> DefaultScalers(double alpha) {
  return {1.0, alpha, 1.0 / alpha};
}

void ValidatePnaConfig(const PnaConfig& cfg) {
  if (cfg.aggregators.empty() || cfg.scalers.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "aggregator and scaler lists must be non-empty");
  }
  for (double s : cfg.scalers) {
    if (!(s > 0.0)) {
      throw Error(ErrorCode::kInvalidConfig, "scalers must be positive");
    }
  }
  if (cfg.embed_dim < 1 || cfg.msg_dim < 1 || cfg.hidden_dim < 1 ||
      cfg.decoder_width < 1 || cfg.decoder_hidden_layers < 0 ||
      cfg.iterations < 0) {
    throw Error(ErrorCode::kInvalidConfig, "non-positive network width");
  }
}

std::vector<std::vector<int>> ExpectedDims(const PnaConfig& cfg) {
  const int h = cfg.hidden_dim, e = cfg.embed_dim, m = cfg.msg_dim;
  const int agg = cfg.AggregatedWidth();
  std::vector<int> decoder{e};
  for (int l = 0; l < cfg.decoder_hidden_layers; ++l) {
    decoder.push_back(cfg.decoder_width);
  }
  decoder.push_back(1);
  return {{5, h, m},       {3 + agg, h, e}, {5, h, m},
          {4 + agg, h, e}, {2 * e, h, m},   {e + agg, h, e},
          {2 * e, h, m},   {e + agg, h, e}, decoder};
}

ModelParams ModelParams::Initialize(const PnaConfig& cfg, uint64_t seed) {
  ValidatePnaConfig(cfg);
  Rng rng(seed);
  ModelParams params;
  const auto dims = ExpectedDims(cfg);
  auto nets = params.Networks();
  for (size_t k = 0; k < nets.size(); ++k) {
    *nets[k] = Mlp(dims[k], HiddenActivation(static_cast<int>(k)),
                   OutputActivation(static_cast<int>(k)), rng,
                   cfg.leaky_slope);
  }
  return params;
}

std::vector<const Mlp*> ModelParams::Networks() const {
  return {&enc_leader_msg, &enc_leader_upd, &enc_follower_msg,
          &enc_follower_upd, &mp_leader_msg, &mp_leader_upd,
          &mp_follower_msg, &mp_follower_upd, &decoder};
}

std::vector<Mlp*> ModelParams::Networks() {
  return {&enc_leader_msg, &enc_leader_upd, &enc_follower_msg,
          &enc_follower_upd, &mp_leader_msg, &mp_leader_upd,
          &mp_follower_msg, &mp_follower_upd, &decoder};
}

std::vector<Tensor> ModelParams::Parameters() const {
  std::vector<Tensor> out;
  for (const Mlp* net : Networks()) {
    for (const Tensor& t : net->Parameters()) out.push_back(t);
  }
  return out;
}

int64_t ModelParams::ParameterCount() const {
  int64_t count = 0;
  for (const Tensor& t : Parameters()) count += t.size();
  return count;
}

ModelParams ModelParams::Clone() const {
  ModelParams copy = *this;
  for (Mlp* net : copy.Networks()) {
    for (Mlp::Layer& layer : net->layers()) {
      auto w = layer.weight.value();
      auto b = layer.bias.value();
      layer.weight = Tensor::Parameter(layer.weight.rows(), layer.weight.cols(),
                                       {w.begin(), w.end()});
      layer.bias = Tensor::Parameter(layer.bias.rows(), layer.bias.cols(),
                                     {b.begin(), b.end()});
    }
  }
  return copy;
}

Tensor PnaAggregate(const Tensor& messages, int group_size,
                    const PnaConfig& cfg) {
  if (group_size < 1 || messages.rows() < 1) {
    throw Error(ErrorCode::kShapeMismatch, "aggregation over no messages");
  }
  std::vector<Tensor> stats;
  for (Aggregator agg : cfg.aggregators) {
    switch (agg) {
      case Aggregator::kMean:
        stats.push_back(nd::SegmentMean(messages, group_size));
        break;
      case Aggregator::kMax:
        stats.push_back(nd::SegmentMax(messages, group_size));
        break;
      case Aggregator::kMin:
        stats.push_back(nd::SegmentMin(messages, group_size));
        break;
      case Aggregator::kStd:
        stats.push_back(nd::SegmentStd(messages, group_size));
        break;
    }
  }
  const Tensor combined = nd::ConcatCols(stats);
  std::vector<Tensor> scaled;
  for (double s : cfg.scalers) {
    scaled.push_back(s == 1.0 ? combined : nd::Scale(combined, s));
  }
  return nd::ConcatCols(scaled);
}

NodeEmbeddings Encode(const TripartiteGraph& graph, const ModelParams& params,
                      const PnaConfig& cfg) {
  const int n1 = graph.n1(), n2 = graph.n2();
  if (n1 < 1 || n2 < 1) {
    throw Error(ErrorCode::kShapeMismatch, "graph needs items on both sides");
  }
  std::vector<double> lf, ff;
  for (const auto& f : graph.leader_feats) lf.insert(lf.end(), f.begin(), f.end());
  for (const auto& f : graph.follower_feats) ff.insert(ff.end(), f.begin(), f.end());
  const Tensor leader = Tensor::Constant(n1, 2, std::move(lf));
  const Tensor follower = Tensor::Constant(n2, 3, std::move(ff));

  // Row i * n2 + j pairs leader i with follower j, and vice versa.
  const Tensor leader_in =
      Concat({nd::RepeatRows(leader, n2), nd::TileRows(follower, n1)});
  const Tensor follower_in =
      Concat({nd::RepeatRows(follower, n1), nd::TileRows(leader, n2)});
  CheckWidth(leader_in, params.enc_leader_msg.input_dim(), "enc_leader_msg input");
  CheckWidth(follower_in, params.enc_follower_msg.input_dim(),
             "enc_follower_msg input");

  const Tensor leader_agg =
      PnaAggregate(params.enc_leader_msg.Forward(leader_in), n2, cfg);
  const Tensor follower_agg =
      PnaAggregate(params.enc_follower_msg.Forward(follower_in), n1, cfg);

  const Tensor leader_upd =
      Concat({leader, Column(n1, graph.cap_feat), leader_agg});
  const Tensor follower_upd =
      Concat({follower, Column(n2, graph.cap_feat), follower_agg});
  CheckWidth(leader_upd, params.enc_leader_upd.input_dim(), "enc_leader_upd input");
  CheckWidth(follower_upd, params.enc_follower_upd.input_dim(),
             "enc_follower_upd input");

  // The constraint node only feeds b into the updates above; it does not
  // take part in message passing.
  return {params.enc_leader_upd.Forward(leader_upd),
          params.enc_follower_upd.Forward(follower_upd), 1};
}

NodeEmbeddings MessagePass(const NodeEmbeddings& emb, const ModelParams& params,
                           const PnaConfig& cfg) {
  const Tensor& x = emb.leader;
  const Tensor& y = emb.follower;
  const int n1 = x.rows(), n2 = y.rows();
  CheckWidth(x, cfg.embed_dim, "leader embedding");
  CheckWidth(y, cfg.embed_dim, "follower embedding");

  const Tensor leader_in = Concat({nd::RepeatRows(x, n2), nd::TileRows(y, n1)});
  const Tensor follower_in =
      Concat({nd::RepeatRows(y, n1), nd::TileRows(x, n2)});
  CheckWidth(leader_in, params.mp_leader_msg.input_dim(), "mp_leader_msg input");
  CheckWidth(follower_in, params.mp_follower_msg.input_dim(),
             "mp_follower_msg input");
  const Tensor leader_agg =
      PnaAggregate(params.mp_leader_msg.Forward(leader_in), n2, cfg);
  const Tensor follower_agg =
      PnaAggregate(params.mp_follower_msg.Forward(follower_in), n1, cfg);
  return {params.mp_leader_upd.Forward(Concat({x, leader_agg})),
          params.mp_follower_upd.Forward(Concat({y, follower_agg})),
          emb.iteration + 1};
}

NodeEmbeddings MessagePass(const NodeEmbeddings& emb, const ModelParams& params,
                           const PnaConfig& cfg, int rounds) {
  NodeEmbeddings out = emb;
  for (int t = 0; t < rounds; ++t) out = MessagePass(out, params, cfg);
  return out;
}

Tensor Decode(const NodeEmbeddings& emb, const ModelParams& params) {
  CheckWidth(emb.leader, params.decoder.input_dim(), "decoder input");
  return params.decoder.Forward(emb.leader);
}

Tensor ForwardTensor(const BlkpInstance& inst, const ModelParams& params,
                     const PnaConfig& cfg, const NormalizationScheme& scheme) {
  const TripartiteGraph graph = BuildGraph(inst, scheme);
  return Decode(MessagePass(Encode(graph, params, cfg), params, cfg,
                            cfg.iterations),
                params);
}

std::vector<double> Forward(const BlkpInstance& inst, const ModelParams& params,
                            const PnaConfig& cfg,
                            const NormalizationScheme& scheme) {
  const Tensor out = ForwardTensor(inst, params, cfg, scheme);
  return {out.value().begin(), out.value().end()};
}

void SaveCheckpoint(const Checkpoint& ckpt, std::ostream& out) {
  const PnaConfig& cfg = ckpt.config;
  json doc;
  doc["format"] = "blkp-checkpoint";
  doc["version"] = kCheckpointFormatVersion;

  json jc;
  jc["embed_dim"] = cfg.embed_dim;
  jc["msg_dim"] = cfg.msg_dim;
  jc["hidden_dim"] = cfg.hidden_dim;
  jc["aggregators"] = json::array();
  for (Aggregator a : cfg.aggregators) jc["aggregators"].push_back(AggregatorName(a));
  jc["scalers"] = json::array();
  for (double s : cfg.scalers) jc["scalers"].push_back(HexDouble(s));
  jc["iterations"] = cfg.iterations;
  jc["decoder_hidden_layers"] = cfg.decoder_hidden_layers;
  jc["decoder_width"] = cfg.decoder_width;
  jc["leaky_slope"] = HexDouble(cfg.leaky_slope);
  doc["config"] = jc;

  doc["normalization"] = {{"version", NormalizationScheme::kVersion},
                          {"value_scale", HexDouble(ckpt.scheme.value_scale)}};
  doc["metadata"] = ckpt.metadata;

  json nets = json::object();
  const auto networks = ckpt.params.Networks();
  for (size_t k = 0; k < networks.size(); ++k) {
    json jn;
    jn["dims"] = networks[k]->dims();
    jn["layers"] = json::array();
    for (const Mlp::Layer& layer : networks[k]->layers()) {
      json jl;
      jl["weight"] = json::array();
      for (double v : layer.weight.value()) jl["weight"].push_back(HexDouble(v));
      jl["bias"] = json::array();
      for (double v : layer.bias.value()) jl["bias"].push_back(HexDouble(v));
      jn["layers"].push_back(jl);
    }
    nets[kNetworkNames[k]] = jn;
  }
  doc["networks"] = nets;
  out << doc.dump() << "\n";
}

Checkpoint LoadCheckpoint(std::istream& in, const PnaConfig* expected) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptCheckpoint, e.what());
  }
  Checkpoint ckpt;
  try {
    if (doc.at("format").get<std::string>() != "blkp-checkpoint") {
      throw Error(ErrorCode::kCorruptCheckpoint, "not a blkp-checkpoint");
    }
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "checkpoint version " + std::to_string(version) +
                      ", supported " +
                      std::to_string(kCheckpointFormatVersion));
    }
    const json& jc = doc.at("config");
    PnaConfig& cfg = ckpt.config;
    cfg.embed_dim = jc.at("embed_dim").get<int>();
    cfg.msg_dim = jc.at("msg_dim").get<int>();
    cfg.hidden_dim = jc.at("hidden_dim").get<int>();
    cfg.aggregators.clear();
    for (const auto& a : jc.at("aggregators")) {
      cfg.aggregators.push_back(ParseAggregator(a.get<std::string>()));
    }
    cfg.scalers.clear();
    for (const auto& s : jc.at("scalers")) cfg.scalers.push_back(ParseHexDouble(s));
    cfg.iterations = jc.at("iterations").get<int>();
    cfg.decoder_hidden_layers = jc.at("decoder_hidden_layers").get<int>();
    cfg.decoder_width = jc.at("decoder_width").get<int>();
    cfg.leaky_slope = ParseHexDouble(jc.at("leaky_slope"));
    ValidatePnaConfig(cfg);

    const json& jn = doc.at("normalization");
    if (jn.at("version").get<int>() != NormalizationScheme::kVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "unsupported normalization scheme version");
    }
    ckpt.scheme.value_scale = ParseHexDouble(jn.at("value_scale"));
    ckpt.metadata =
        doc.at("metadata").get<std::map<std::string, std::string>>();

    if (expected != nullptr && !(*expected == cfg)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "checkpoint config (embed_dim " +
                      std::to_string(cfg.embed_dim) + ", msg_dim " +
                      std::to_string(cfg.msg_dim) +
                      ") differs from the expected config (embed_dim " +
                      std::to_string(expected->embed_dim) + ", msg_dim " +
                      std::to_string(expected->msg_dim) + ")");
    }

    const auto dims = ExpectedDims(cfg);
    auto networks = ckpt.params.Networks();
    Rng unused(0);
    for (size_t k = 0; k < networks.size(); ++k) {
      const json& net = doc.at("networks").at(kNetworkNames[k]);
      if (net.at("dims").get<std::vector<int>>() != dims[k]) {
        throw Error(ErrorCode::kDimensionMismatch,
                    std::string("network ") + kNetworkNames[k] +
                        " has dimensions inconsistent with its config");
      }
      *networks[k] = Mlp(dims[k], HiddenActivation(static_cast<int>(k)),
                         OutputActivation(static_cast<int>(k)), unused,
                         cfg.leaky_slope);
      const json& layers = net.at("layers");
      if (layers.size() != networks[k]->layers().size()) {
        throw Error(ErrorCode::kDimensionMismatch, "layer count mismatch");
      }
      for (size_t l = 0; l < layers.size(); ++l) {
        Mlp::Layer& layer = networks[k]->layers()[l];
        for (auto [field, tensor] :
             {std::pair{"weight", &layer.weight}, std::pair{"bias", &layer.bias}}) {
          const json& values = layers[l].at(field);
          auto dest = tensor->mutable_value();
          if (values.size() != dest.size()) {
            throw Error(ErrorCode::kDimensionMismatch,
                        std::string(kNetworkNames[k]) + " " + field +
                            " has the wrong number of entries");
          }
          for (size_t v = 0; v < dest.size(); ++v) {
            dest[v] = ParseHexDouble(values[v]);
          }
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptCheckpoint, e.what());
  }
  return ckpt;
}

void SaveCheckpointFile(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  SaveCheckpoint(ckpt, out);
}

Checkpoint LoadCheckpointFile(const std::string& path,
                              const PnaConfig* expected) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return LoadCheckpoint(in, expected);
}

}  // namespace blkp
