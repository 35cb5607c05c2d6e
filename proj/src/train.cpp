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

#include "train.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "agent.hpp"

namespace wccf {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) fail(ErrorCode::Config, "train.learning_rate must be positive");
  if (batch_size == 0) fail(ErrorCode::Config, "train.batch_size must be positive");
  if (!(mask_prob >= 0.0 && mask_prob <= 1.0)) fail(ErrorCode::Config, "train.mask_prob must be in [0,1]");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && adam_eps > 0.0))
    fail(ErrorCode::Config, "invalid Adam constants");
}

Adam::Adam(const ModelParams& params, const TrainConfig& cfg)
    : m_(params.zeros_like()),
      v_(params.zeros_like()),
      beta1_(cfg.beta1),
      beta2_(cfg.beta2),
      eps_(cfg.adam_eps),
      lr_(cfg.learning_rate) {}

void Adam::step(ModelParams& params, const ModelParams& grad) {
  struct View {
    double* p;
    std::size_t n;
    bool trainable;
  };
  auto collect = [](ModelParams& x) {
    std::vector<View> out;
    for_each_tensor(x, [&](std::string_view, double* d, std::size_t n, bool tr) { out.push_back({d, n, tr}); });
    return out;
  };
  std::vector<const double*> g;
  for_each_tensor(grad, [&](std::string_view, const double* d, std::size_t, bool) { g.push_back(d); });
  const auto p = collect(params);
  const auto m = collect(m_);
  const auto v = collect(v_);

  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!p[k].trainable) continue;
    for (std::size_t i = 0; i < p[k].n; ++i) {
      const double gi = g[k][i];
      m[k].p[i] = beta1_ * m[k].p[i] + (1.0 - beta1_) * gi;
      v[k].p[i] = beta2_ * v[k].p[i] + (1.0 - beta2_) * gi * gi;
      p[k].p[i] -= lr_ * (m[k].p[i] / c1) / (std::sqrt(v[k].p[i] / c2) + eps_);
    }
  }
}

Mat fit_radio_map(const std::vector<EpisodeRecord>& episodes, const ModelShape& shape, const EnvConfig& env) {
  const auto buckets = static_cast<Eigen::Index>(shape.radio_map_buckets);
  const auto d = static_cast<Eigen::Index>(shape.d_model);
  Mat map = Mat::Zero(buckets, d);
  for (const auto& ep : episodes) {
    for (const auto& s : ep.steps) {
      const auto b = static_cast<Eigen::Index>(road_bucket(s.x, env.mobility, shape.radio_map_buckets));
      const auto bin = static_cast<Eigen::Index>(static_cast<std::size_t>(s.beam) * shape.d_model / shape.num_beams);
      map(b, bin) += 1.0;
    }
  }
  for (Eigen::Index b = 0; b < buckets; ++b) {
    const double total = map.row(b).sum();
    if (total > 0.0) map.row(b) /= total;
  }
  return map;
}

namespace {

// Finds the step whose timestamp equals ts, searching backwards from `from`.
std::size_t step_at(const EpisodeRecord& ep, std::size_t from, double ts) {
  for (std::size_t k = from + 1; k-- > 0;)
    if (ep.steps[k].t == ts) return k;
  fail(ErrorCode::Contract, "history token does not match any recorded step");
}

ContextToken placeholder(TokenTag tag, double ts, TtlClass ttl) {
  ContextToken tok;
  tok.tag = tag;
  tok.timestamp = ts;
  tok.ttl = ttl;
  return tok;
}

}  // namespace

std::vector<Sample> build_training_samples(const std::vector<EpisodeRecord>& episodes, const ModelShape& shape,
                                           const EnvConfig& env, const StoreConfig& store, double mask_prob,
                                           Rng& rng) {
  if (store.budget + kFixedSlots > shape.max_seq)
    fail(ErrorCode::Contract, "store budget " + std::to_string(store.budget) + " exceeds the model's history slots");
  std::vector<Sample> samples;
  std::bernoulli_distribution drop(mask_prob);
  for (const auto& ep : episodes) {
    if (ep.steps.size() < 2) continue;
    // Only tags and timestamps matter here; slots are resolved back to the
    // recorded features so gradients reach the encoders.
    ContextDelivery delivery(store);
    for (std::size_t t = 0; t + 1 < ep.steps.size(); ++t) {
      const auto& rec = ep.steps[t];
      std::optional<ContextToken> prior;
      if (t == 0) prior = placeholder(TokenTag::RadioMap, rec.t, TtlClass::Static);
      const auto history = delivery.begin_step(rec.t, std::move(prior));

      const bool has_image = !drop(rng);
      const bool has_lidar = !drop(rng);

      Sample s;
      s.label = static_cast<std::size_t>(ep.steps[t + 1].beam);
      s.slots.push_back(SlotSource{});
      s.slots.push_back(SlotSource::encoded(rec.observation(Modality::Gps)));
      SlotSource miss;
      miss.kind = SlotSource::Kind::MissingImage;
      s.slots.push_back(has_image ? SlotSource::encoded(rec.observation(Modality::Image)) : miss);
      miss.kind = SlotSource::Kind::MissingLidar;
      s.slots.push_back(has_lidar ? SlotSource::encoded(rec.observation(Modality::Lidar)) : miss);
      for (const auto& tok : history) {
        const auto& src = ep.steps[step_at(ep, t, tok.timestamp)];
        switch (tok.tag) {
          case TokenTag::Gps: s.slots.push_back(SlotSource::encoded(src.observation(Modality::Gps))); break;
          case TokenTag::Image: s.slots.push_back(SlotSource::encoded(src.observation(Modality::Image))); break;
          case TokenTag::Lidar: s.slots.push_back(SlotSource::encoded(src.observation(Modality::Lidar))); break;
          case TokenTag::RadioMap: {
            SlotSource r;
            r.kind = SlotSource::Kind::RadioMap;
            r.bucket = road_bucket(src.gps[0], env.mobility, shape.radio_map_buckets);
            s.slots.push_back(r);
            break;
          }
          default: fail(ErrorCode::Contract, "unexpected token tag in history");
        }
      }
      samples.push_back(std::move(s));

      std::vector<ContextToken> acquired;
      acquired.push_back(placeholder(TokenTag::Gps, rec.t, TtlClass::Fast));
      if (has_image) acquired.push_back(placeholder(TokenTag::Image, rec.t, TtlClass::Fast));
      if (has_lidar) acquired.push_back(placeholder(TokenTag::Lidar, rec.t, TtlClass::Fast));
      delivery.end_step(rec.t, std::move(acquired));
    }
  }
  return samples;
}

TrainResult train_model(const std::vector<EpisodeRecord>& episodes, const TrainConfig& cfg, const ModelShape& shape,
                        const EnvConfig& env, const StoreConfig& store) {
  cfg.validate();
  shape.validate();
  TrainResult out;
  out.params = init_model(shape, env, derive_seed(Stream::ModelInit, cfg.seed));
  out.params.radio_map = fit_radio_map(episodes, shape, env);

  Rng mask_rng(derive_seed(Stream::Masking, cfg.seed));
  Adam adam(out.params, cfg);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fresh masks every epoch.
    auto samples = build_training_samples(episodes, shape, env, store, cfg.mask_prob, mask_rng);
    if (samples.empty()) fail(ErrorCode::Contract, "train_model: dataset has no step with a successor");
    std::shuffle(samples.begin(), samples.end(), mask_rng);

    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); i += cfg.batch_size) {
      const std::size_t n = std::min(cfg.batch_size, samples.size() - i);
      const auto lg = loss_and_grad(std::span<const Sample>(samples.data() + i, n), out.params);
      if (!std::isfinite(lg.loss))
        fail(ErrorCode::Numeric, "training loss became non-finite at epoch " + std::to_string(epoch) +
                                     ", batch " + std::to_string(i / cfg.batch_size));
      adam.step(out.params, lg.grad);
      total += lg.loss * static_cast<double>(n);
    }
    if (!out.params.all_finite())
      fail(ErrorCode::Numeric, "parameters became non-finite at epoch " + std::to_string(epoch));
    out.loss_curve.push_back(total / static_cast<double>(samples.size()));
  }
  return out;
}

void write_loss_curve_csv(std::ostream& out, std::span<const double> curve) {
  out << "epoch,loss\n";
  char buf[32];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto res = std::to_chars(buf, buf + sizeof buf, curve[i]);
    out << i << ',';
    out.write(buf, res.ptr - buf);
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed to write loss curve");
}

}  // namespace wccf
