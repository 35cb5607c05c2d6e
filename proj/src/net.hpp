// SPDX-License-Identifier: Apache-2.0
//
// wccf: wireless context engineering simulator and learning stack
// Copyright (C) 2026 The wccf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Small pre-norm Transformer classifier over the beam codebook.
//
// Sequence layout (rows of a T x d matrix): CLS, GPS, IMAGE|MISSING_IMAGE,
// LIDAR|MISSING_LIDAR, history... . A learned positional vector is added per
// slot. Each block is
//   h = x + MHA(LN1(x)),  y = h + W2 gelu(W1 LN2(h) + b1) + b2
// and the beam logits are read from the final-normalised CLS row.
//
// Gradients are derived by hand; tests/test_net.cpp checks every tensor
// against central finite differences.

#ifndef WCCF_NET_HPP
#define WCCF_NET_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embed.hpp"

namespace wccf {

struct ModelShape {
  std::size_t d_model = 32;
  std::size_t num_heads = 2;
  std::size_t num_blocks = 2;
  std::size_t ffn_hidden = 64;
  std::size_t max_seq = 8;
  std::size_t num_beams = 32;
  std::size_t radio_map_buckets = 10;

  std::size_t head_dim() const { return d_model / num_heads; }
  void validate() const;
  bool operator==(const ModelShape&) const = default;
};

struct LayerNormParams {
  Vec gain;
  Vec bias;
};

struct BlockParams {
  LayerNormParams ln1;
  Mat wq, wk, wv, wo;  // d x d
  Vec bq, bk, bv, bo;
  LayerNormParams ln2;
  Mat w1;  // ffn x d
  Vec b1;
  Mat w2;  // d x ffn
  Vec b2;
};

struct ModelParams {
  ModelShape shape;
  EncoderParams encoders;
  Mat positional;  // max_seq x d
  std::vector<BlockParams> blocks;
  LayerNormParams final_ln;
  Mat head;  // num_beams x d
  Vec head_bias;
  // Static radio-map prior: per road bucket, the empirical best-beam
  // histogram folded onto d_model bins. Fitted from data, never trained.
  Mat radio_map;  // radio_map_buckets x d

  // Same shapes, every entry zero (used for gradients and optimiser moments).
  ModelParams zeros_like() const;
  void validate() const;
  bool all_finite() const;
};

inline constexpr double kLayerNormEps = 1e-5;

// Zero-mean Gaussian weights scaled by 1/sqrt(fan_in); biases zero,
// layer-norm gains one.
ModelParams init_model(const ModelShape& shape, const EnvConfig& env, std::uint64_t seed);

// All-zero parameters of the given shape (uniform logits).
ModelParams zero_model(const ModelShape& shape, const EnvConfig& env);

// Visits every tensor as a flat array. `trainable` is false for the fixed
// input normalisation and the radio map.
using TensorVisitor = std::function<void(std::string_view name, double* data, std::size_t size, bool trainable)>;
using ConstTensorVisitor =
    std::function<void(std::string_view name, const double* data, std::size_t size, bool trainable)>;
void for_each_tensor(ModelParams& params, const TensorVisitor& fn);
void for_each_tensor(const ModelParams& params, const ConstTensorVisitor& fn);

// ---------------------------------------------------------------------------
// Inference on materialised tokens

Vec forward(std::span<const ContextToken> sequence, const ModelParams& params);

Vec softmax(const Vec& logits);

// Indices of the k most probable beams, most probable first; equal
// probabilities resolve to the lower index.
std::vector<std::size_t> softmax_topk(const Vec& logits, std::size_t k);

struct Prediction {
  std::vector<std::size_t> topk;
  double top1_prob = 0.0;
};

Prediction predict(std::span<const ContextToken> sequence, const ModelParams& params, std::size_t k);

std::vector<std::size_t> predict_topk(const Observation& gps, const std::optional<Observation>& image,
                                      const std::optional<Observation>& lidar,
                                      std::span<const ContextToken> history, const ModelParams& params,
                                      std::size_t k = 3);

// ---------------------------------------------------------------------------
// Training-time representation: slots refer to where a token comes from so
// that gradients reach the encoders, learnable tokens and positional table.

struct SlotSource {
  enum class Kind { Cls, Encoded, MissingImage, MissingLidar, RadioMap };
  Kind kind = Kind::Cls;
  Modality modality = Modality::Gps;   // Encoded only
  std::array<double, 6> features{};    // Encoded only, first feature_dim entries used
  std::size_t bucket = 0;              // RadioMap only

  static SlotSource encoded(const Observation& obs);
};

struct Sample {
  std::vector<SlotSource> slots;
  std::size_t label = 0;
};

struct LossAndGrad {
  double loss = 0.0;
  ModelParams grad;
};

// Mean cross-entropy of the true beam over the batch, with exact gradients.
LossAndGrad loss_and_grad(std::span<const Sample> batch, const ModelParams& params);

// Mean cross-entropy only.
double batch_loss(std::span<const Sample> batch, const ModelParams& params);

// Materialises a sample's token sequence (no gradient bookkeeping).
std::vector<ContextToken> materialise(const Sample& sample, const ModelParams& params);

}  // namespace wccf

#endif  // WCCF_NET_HPP
