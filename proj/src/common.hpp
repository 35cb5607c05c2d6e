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

#ifndef WCCF_COMMON_HPP
#define WCCF_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wccf {

// Error categories. The C API maps each one to a distinct status code.
enum class ErrorCode {
  Schema,     // malformed data, shape or dimension mismatch
  Contract,   // violated precondition
  Geometry,   // degenerate geometry (coincident points)
  Io,         // file could not be opened, read or written
  Config,     // unknown key or invalid value in a run configuration
  Numeric,    // NaN/Inf encountered
  Undefined,  // comparison with no defined result (zero denominator)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

enum class Modality { Gps = 0, Image = 1, Lidar = 2 };

inline constexpr std::size_t kNumModalities = 3;

constexpr std::size_t feature_dim(Modality m) {
  switch (m) {
    case Modality::Gps: return 2;
    case Modality::Image: return 4;
    case Modality::Lidar: return 6;
  }
  return 0;
}

constexpr std::string_view to_string(Modality m) {
  switch (m) {
    case Modality::Gps: return "GPS";
    case Modality::Image: return "IMAGE";
    case Modality::Lidar: return "LIDAR";
  }
  return "?";
}

using Rng = std::mt19937_64;

// Independent streams derived from one user seed, so that e.g. training data
// and evaluation episodes never share trajectories.
enum class Stream : std::uint64_t {
  Dataset = 1,
  ModelInit = 2,
  Masking = 3,
  PolicyEpisodes = 4,
  PolicyExploration = 5,
  Evaluation = 6,
};

inline std::uint64_t derive_seed(Stream stream, std::uint64_t seed, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace wccf

#endif  // WCCF_COMMON_HPP
