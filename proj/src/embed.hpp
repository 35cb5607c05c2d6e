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

#ifndef WCCF_EMBED_HPP
#define WCCF_EMBED_HPP

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "env.hpp"

namespace wccf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class TokenTag { Gps, Image, Lidar, Cls, MissingImage, MissingLidar, RadioMap };
enum class TtlClass { Static, Slow, Fast };

inline constexpr std::size_t kNumTokenTags = 7;

constexpr std::string_view to_string(TokenTag t) {
  switch (t) {
    case TokenTag::Gps: return "GPS";
    case TokenTag::Image: return "IMAGE";
    case TokenTag::Lidar: return "LIDAR";
    case TokenTag::Cls: return "CLS";
    case TokenTag::MissingImage: return "MISSING_IMAGE";
    case TokenTag::MissingLidar: return "MISSING_LIDAR";
    case TokenTag::RadioMap: return "RADIO_MAP";
  }
  return "?";
}

constexpr TokenTag tag_of(Modality m) {
  switch (m) {
    case Modality::Gps: return TokenTag::Gps;
    case Modality::Image: return TokenTag::Image;
    case Modality::Lidar: return TokenTag::Lidar;
  }
  return TokenTag::Gps;
}

struct ContextToken {
  Vec embedding;
  TokenTag tag = TokenTag::Gps;
  double timestamp = 0.0;
  TtlClass ttl = TtlClass::Fast;
  double importance = 1.0;

  bool operator==(const ContextToken& o) const {
    return tag == o.tag && timestamp == o.timestamp && ttl == o.ttl && importance == o.importance &&
           embedding.size() == o.embedding.size() && embedding == o.embedding;
  }
};

// Affine projection of one modality into the shared space:
//   embedding = tanh(W * ((features - offset) .* scale) + b)
// offset/scale are fixed input normalisation, not trained.
struct ModalityEncoder {
  Mat weight;  // d_model x feature_dim
  Vec bias;    // d_model
  Vec offset;  // feature_dim
  Vec scale;   // feature_dim

  Vec normalise(std::span<const double> features) const;
};

struct EncoderParams {
  std::array<ModalityEncoder, kNumModalities> encoders;
  Vec missing_image;
  Vec missing_lidar;
  Vec cls;

  std::size_t d_model() const { return static_cast<std::size_t>(cls.size()); }
  const ModalityEncoder& encoder(Modality m) const { return encoders[static_cast<std::size_t>(m)]; }
  ModalityEncoder& encoder(Modality m) { return encoders[static_cast<std::size_t>(m)]; }

  // Zero weights with normalisation derived from the environment geometry.
  static EncoderParams zeros(std::size_t d_model, const EnvConfig& env);
  void validate() const;
};

ContextToken encode(const Observation& obs, const EncoderParams& params);
ContextToken missing_token(Modality modality, const EncoderParams& params, double timestamp = 0.0);
ContextToken cls_token(const EncoderParams& params, double timestamp = 0.0);

// [CLS, GPS, IMAGE or MISSING_IMAGE, LIDAR or MISSING_LIDAR, history...]
std::vector<ContextToken> build_sequence(const Observation& gps, const std::optional<Observation>& image,
                                         const std::optional<Observation>& lidar,
                                         std::span<const ContextToken> history, const EncoderParams& params,
                                         std::size_t max_history);

inline constexpr std::size_t kFixedSlots = 4;

}  // namespace wccf

#endif  // WCCF_EMBED_HPP
