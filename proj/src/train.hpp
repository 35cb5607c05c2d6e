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

// Masked-modality training of the beam predictor.

#ifndef WCCF_TRAIN_HPP
#define WCCF_TRAIN_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "net.hpp"
#include "store.hpp"

namespace wccf {

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::size_t epochs = 20;
  double mask_prob = 0.5;  // per contextual modality, per step
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

class Adam {
 public:
  Adam(const ModelParams& params, const TrainConfig& cfg);
  // One update of every trainable tensor.
  void step(ModelParams& params, const ModelParams& grad);

 private:
  ModelParams m_, v_;
  double beta1_, beta2_, eps_, lr_;
  std::size_t t_ = 0;
};

// Per road bucket, the histogram of best beams folded onto d_model bins
// and normalised to sum one.
Mat fit_radio_map(const std::vector<EpisodeRecord>& episodes, const ModelShape& shape, const EnvConfig& env);

// One sample per decision step: inputs of step t with each contextual
// modality independently dropped with probability mask_prob, history from
// the context store as it would be at inference, label = best beam at t+1.
std::vector<Sample> build_training_samples(const std::vector<EpisodeRecord>& episodes, const ModelShape& shape,
                                           const EnvConfig& env, const StoreConfig& store, double mask_prob,
                                           Rng& rng);

struct TrainResult {
  ModelParams params;
  std::vector<double> loss_curve;  // mean training loss per epoch
};

TrainResult train_model(const std::vector<EpisodeRecord>& episodes, const TrainConfig& cfg, const ModelShape& shape,
                        const EnvConfig& env, const StoreConfig& store);

// CSV: epoch,loss
void write_loss_curve_csv(std::ostream& out, std::span<const double> curve);

}  // namespace wccf

#endif  // WCCF_TRAIN_HPP
