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

#ifndef WCCF_POLICY_TRAINING_HPP
#define WCCF_POLICY_TRAINING_HPP

#include <vector>

#include "agent.hpp"

namespace wccf {

struct PolicyTrainResult {
  PolicyTable table;
  std::vector<double> reward_curve;  // mean per-step reward of each episode
};

// Q-learning against a frozen model. Episodes come from the PolicyEpisodes
// stream of cfg.seed, exploration draws from PolicyExploration.
PolicyTrainResult train_policy(const ModelParams& model, const EnvConfig& env, const RLConfig& cfg,
                               const CostSpec& costs, const StoreConfig& store = {},
                               const BeliefThresholds& thresholds = {});

// Same loop over caller-supplied episodes.
PolicyTrainResult train_policy_on(const std::vector<EpisodeRecord>& episodes, const AgentSetup& setup,
                                  const RLConfig& cfg);

}  // namespace wccf

#endif  // WCCF_POLICY_TRAINING_HPP
