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

// Run configuration: a flat text file of `section.key = value` lines.
// '#' starts a comment. Unknown keys are rejected.

#ifndef WCCF_CONFIG_HPP
#define WCCF_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "net.hpp"
#include "policy.hpp"
#include "store.hpp"
#include "train.hpp"

namespace wccf {

struct RunConfig {
  std::uint64_t seed = 0;
  EnvConfig env;
  std::size_t data_episodes = 150;
  ModelShape model;
  TrainConfig train;
  RLConfig rl;
  CostSpec costs;
  StoreConfig store;
  BeliefThresholds thresholds;
  std::size_t eval_episodes = 100;
  std::vector<std::uint64_t> eval_seeds{0, 1, 2, 3, 4};
  std::vector<std::string> eval_configs{"Only_GPS", "Missing_image", "Missing_LiDAR", "Full_observation",
                                        "RL_policy"};

  // Component configs with the run seed and shared sizes filled in.
  ModelShape model_shape() const;
  TrainConfig train_config() const;
  RLConfig rl_config() const;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace wccf

#endif  // WCCF_CONFIG_HPP
