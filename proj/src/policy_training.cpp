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

#include "policy_training.hpp"

#include <string>

namespace wccf {

PolicyTrainResult train_policy_on(const std::vector<EpisodeRecord>& episodes, const AgentSetup& setup,
                                  const RLConfig& cfg) {
  cfg.validate();
  setup.costs.validate();
  std::size_t total = 0;
  for (const auto& ep : episodes)
    if (ep.steps.size() > 1) total += ep.steps.size() - 1;

  PolicyTrainResult out;
  Rng rng(derive_seed(Stream::PolicyExploration, cfg.seed));
  std::size_t step = 0;
  out.reward_curve.reserve(episodes.size());
  for (std::size_t e = 0; e < episodes.size(); ++e) {
    const auto choose = [&](const AgentState& s) { return select_action(out.table, s, cfg.epsilon(step++, total), rng); };
    const auto learn = [&](const AgentState& s, Action a, double r, const std::optional<AgentState>& next) {
      q_update(out.table, s, a, r, next, cfg.alpha, cfg.gamma);
    };
    const auto logs = run_episode(episodes[e], setup, choose, learn);
    double sum = 0.0;
    for (const auto& l : logs) sum += l.reward;
    out.reward_curve.push_back(logs.empty() ? 0.0 : sum / static_cast<double>(logs.size()));
    if (!out.table.all_finite())
      fail(ErrorCode::Numeric, "Q table became non-finite in episode " + std::to_string(e));
  }
  return out;
}

PolicyTrainResult train_policy(const ModelParams& model, const EnvConfig& env, const RLConfig& cfg,
                               const CostSpec& costs, const StoreConfig& store, const BeliefThresholds& thresholds) {
  AgentSetup setup;
  setup.model = &model;
  setup.env = env;
  setup.store = store;
  setup.costs = costs;
  setup.thresholds = thresholds;
  const auto episodes = generate_episodes(env, Stream::PolicyEpisodes, cfg.seed, cfg.episodes);
  return train_policy_on(episodes, setup, cfg);
}

}  // namespace wccf
