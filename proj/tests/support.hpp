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

// Helpers shared by the unit tests.

#ifndef WCCF_TESTS_SUPPORT_HPP
#define WCCF_TESTS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "env.hpp"
#include "net.hpp"

namespace wccf::test {

inline Observation random_observation(Modality m, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Observation o;
  o.modality = m;
  o.features.resize(feature_dim(m));
  for (auto& f : o.features) f = n(rng);
  return o;
}

// Every tensor of the model filled with N(0, scale^2).
inline void randomise(ModelParams& p, Rng& rng, double scale, bool include_fixed = false) {
  std::normal_distribution<double> n(0.0, scale);
  for_each_tensor(p, [&](std::string_view, double* d, std::size_t size, bool trainable) {
    if (!trainable && !include_fixed) return;
    for (std::size_t i = 0; i < size; ++i) d[i] = n(rng);
  });
}

// Error code raised by fn, or nullopt if it returned normally.
inline std::optional<ErrorCode> code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("wccf_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace wccf::test

#endif  // WCCF_TESTS_SUPPORT_HPP
