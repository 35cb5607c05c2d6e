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

// Per-step agent loop shared by policy training, evaluation and model
// training: context is assembled and delivered to the model at every
// environment step.

#ifndef WCCF_AGENT_HPP
#define WCCF_AGENT_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "env.hpp"
#include "net.hpp"
#include "policy.hpp"
#include "store.hpp"

namespace wccf {

// Wraps the context store with the per-step delivery cadence: sweep at the
// start of a step, seed the static radio-map prior on the first step, and
// commit the step's acquired tokens after inference.
class ContextDelivery {
 public:
  explicit ContextDelivery(const StoreConfig& cfg) : store_(cfg) {}

  std::span<const ContextToken> begin_step(double now, std::optional<ContextToken> prior);
  void end_step(double now, std::vector<ContextToken> acquired);

  const ContextStore& store() const { return store_; }

 private:
  ContextStore store_;
};

ContextToken radio_map_token(const ModelParams& model, std::size_t bucket, double now);

struct StepLog {
  std::size_t step = 0;
  AgentState state;
  Action action = Action::None;
  std::vector<std::size_t> topk;
  std::size_t true_beam = 0;
  bool correct = false;
  double reward = 0.0;
  double cost = 0.0;
  double top1_prob = 0.0;
  std::size_t history_tokens = 0;
};

struct AgentSetup {
  const ModelParams* model = nullptr;
  EnvConfig env;
  StoreConfig store;
  CostSpec costs;
  BeliefThresholds thresholds;
  std::size_t top_k = 3;
};

using ActionChooser = std::function<Action(const AgentState&)>;
using TransitionSink =
    std::function<void(const AgentState& s, Action a, double r, const std::optional<AgentState>& next)>;

// Plays one recorded episode. At step t the agent sees GPS (always) plus the
// chosen modalities and predicts the best beam of step t+1.
std::vector<StepLog> run_episode(const EpisodeRecord& episode, const AgentSetup& setup, const ActionChooser& choose,
                                 const TransitionSink& on_transition = {});

}  // namespace wccf

#endif  // WCCF_AGENT_HPP
