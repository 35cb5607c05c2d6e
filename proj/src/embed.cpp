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

#include "embed.hpp"

#include <string>

namespace wccf {

Vec ModalityEncoder::normalise(std::span<const double> features) const {
  Vec x(static_cast<Eigen::Index>(features.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = (features[static_cast<std::size_t>(i)] - offset[i]) * scale[i];
  return x;
}

EncoderParams EncoderParams::zeros(std::size_t d_model, const EnvConfig& env) {
  const auto d = static_cast<Eigen::Index>(d_model);
  const double half_road = 0.5 * (env.mobility.x_max - env.mobility.x_min);
  const double mid_road = 0.5 * (env.mobility.x_max + env.mobility.x_min);
  const double lane_half = half_road * std::abs(env.paths.blocker_lane_y / env.mobility.road_y);
  const double width = 2.0 * env.blockage.half_width;

  EncoderParams p;
  for (std::size_t m = 0; m < kNumModalities; ++m) {
    auto& e = p.encoders[m];
    const auto f = static_cast<Eigen::Index>(feature_dim(static_cast<Modality>(m)));
    e.weight = Mat::Zero(d, f);
    e.bias = Vec::Zero(d);
    e.offset = Vec::Zero(f);
    e.scale = Vec::Ones(f);
  }
  auto& gps = p.encoder(Modality::Gps);
  gps.offset << mid_road, env.mobility.road_y;
  gps.scale << 1.0 / half_road, 1.0 / half_road;
  auto& img = p.encoder(Modality::Image);
  img.scale << 1.0, 1.0 / lane_half, 1.0 / width, 1.0;
  auto& lid = p.encoder(Modality::Lidar);
  lid.offset << mid_road, env.mobility.road_y, 0.0, 0.0, 0.0, 0.0;
  lid.scale << 1.0 / half_road, 1.0 / half_road, 1.0, 1.0, 1.0, 1.0;

  p.missing_image = Vec::Zero(d);
  p.missing_lidar = Vec::Zero(d);
  p.cls = Vec::Zero(d);
  return p;
}

void EncoderParams::validate() const {
  const auto d = cls.size();
  if (d == 0) fail(ErrorCode::Schema, "encoder d_model must be positive");
  for (std::size_t m = 0; m < kNumModalities; ++m) {
    const auto& e = encoders[m];
    const auto f = static_cast<Eigen::Index>(feature_dim(static_cast<Modality>(m)));
    if (e.weight.rows() != d || e.weight.cols() != f || e.bias.size() != d || e.offset.size() != f ||
        e.scale.size() != f)
      fail(ErrorCode::Schema, std::string(to_string(static_cast<Modality>(m))) + " encoder has inconsistent shapes");
  }
  if (missing_image.size() != d || missing_lidar.size() != d)
    fail(ErrorCode::Schema, "missing-token dimension differs from d_model");
}

ContextToken encode(const Observation& obs, const EncoderParams& params) {
  obs.validate();
  const auto& enc = params.encoder(obs.modality);
  ContextToken tok;
  tok.embedding = (enc.weight * enc.normalise(obs.features) + enc.bias).array().tanh().matrix();
  tok.tag = tag_of(obs.modality);
  tok.timestamp = obs.timestamp;
  tok.ttl = TtlClass::Fast;
  return tok;
}

ContextToken missing_token(Modality modality, const EncoderParams& params, double timestamp) {
  ContextToken tok;
  tok.timestamp = timestamp;
  tok.ttl = TtlClass::Fast;
  switch (modality) {
    case Modality::Image:
      tok.embedding = params.missing_image;
      tok.tag = TokenTag::MissingImage;
      break;
    case Modality::Lidar:
      tok.embedding = params.missing_lidar;
      tok.tag = TokenTag::MissingLidar;
      break;
    case Modality::Gps:
      fail(ErrorCode::Contract, "GPS is task data and has no missing token");
  }
  return tok;
}

ContextToken cls_token(const EncoderParams& params, double timestamp) {
  ContextToken tok;
  tok.embedding = params.cls;
  tok.tag = TokenTag::Cls;
  tok.timestamp = timestamp;
  tok.ttl = TtlClass::Fast;
  return tok;
}

std::vector<ContextToken> build_sequence(const Observation& gps, const std::optional<Observation>& image,
                                         const std::optional<Observation>& lidar,
                                         std::span<const ContextToken> history, const EncoderParams& params,
                                         std::size_t max_history) {
  if (gps.modality != Modality::Gps) fail(ErrorCode::Contract, "build_sequence: first observation must be GPS");
  if (image && image->modality != Modality::Image) fail(ErrorCode::Contract, "build_sequence: image slot holds " + std::string(to_string(image->modality)));
  if (lidar && lidar->modality != Modality::Lidar) fail(ErrorCode::Contract, "build_sequence: lidar slot holds " + std::string(to_string(lidar->modality)));
  if (history.size() > max_history)
    fail(ErrorCode::Contract, "build_sequence: history of " + std::to_string(history.size()) +
                                  " tokens exceeds budget " + std::to_string(max_history));

  std::vector<ContextToken> seq;
  seq.reserve(kFixedSlots + history.size());
  seq.push_back(cls_token(params, gps.timestamp));
  seq.push_back(encode(gps, params));
  seq.push_back(image ? encode(*image, params) : missing_token(Modality::Image, params, gps.timestamp));
  seq.push_back(lidar ? encode(*lidar, params) : missing_token(Modality::Lidar, params, gps.timestamp));
  for (const auto& tok : history) {
    if (tok.embedding.size() != params.cls.size())
      fail(ErrorCode::Schema, "history token has embedding dimension " + std::to_string(tok.embedding.size()));
    seq.push_back(tok);
  }
  return seq;
}

}  // namespace wccf
