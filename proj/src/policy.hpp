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

// Cost-aware modality acquisition with one-step tabular Q-learning.
// GPS is always acquired; the agent chooses which contextual modalities to
// add at each step.

#ifndef WCCF_POLICY_HPP
#define WCCF_POLICY_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "common.hpp"

namespace wccf {

struct CostSpec {
  double gps = 0.01;
  double image = 0.1;
  double lidar = 0.9;
  void validate() const;
  bool operator==(const CostSpec&) const = default;
};

enum class Action : std::uint8_t { None = 0, Image = 1, Lidar = 2, Both = 3 };
inline constexpr std::size_t kNumActions = 4;

constexpr bool acquires_image(Action a) { return a == Action::Image || a == Action::Both; }
constexpr bool acquires_lidar(Action a) { return a == Action::Lidar || a == Action::Both; }
constexpr Action action_from_index(std::size_t i) { return static_cast<Action>(i); }
constexpr std::size_t index_of(Action a) { return static_cast<std::size_t>(a); }

// Acquisition cost of one step (GPS charged unconditionally).
double step_cost(Action a, const CostSpec& costs);

inline constexpr std::size_t kPositionBuckets = 10;
inline constexpr std::size_t kBeliefBuckets = 3;
inline constexpr std::size_t kNumStates = kPositionBuckets * kBeliefBuckets * kNumActions;

struct BeliefThresholds {
  double low = 0.4;   // top-1 probability below: "low"
  double high = 0.7;  // above: "high"; otherwise "mid"
  bool operator==(const BeliefThresholds&) const = default;
};

std::size_t belief_bucket(double top1_prob, const BeliefThresholds& th);

struct AgentState {
  std::size_t position_bucket = 0;
  std::size_t belief = 0;
  Action prev_action = Action::None;

  std::size_t index() const;
  static AgentState from_index(std::size_t id);
  bool operator==(const AgentState&) const = default;
};

class PolicyTable {
 public:
  PolicyTable() : q_(kNumStates * kNumActions, 0.0) {}

  double& at(std::size_t state, Action a) { return q_[state * kNumActions + index_of(a)]; }
  double at(std::size_t state, Action a) const { return q_[state * kNumActions + index_of(a)]; }
  std::span<const double> row(std::size_t state) const {
    return std::span<const double>(q_).subspan(state * kNumActions, kNumActions);
  }
  std::span<double> row(std::size_t state) { return std::span<double>(q_).subspan(state * kNumActions, kNumActions); }

  // argmax over the row, ties to the lowest action index.
  Action greedy(std::size_t state) const;
  double max_value(std::size_t state) const;
  bool all_finite() const;

  bool operator==(const PolicyTable&) const = default;

 private:
  std::vector<double> q_;
};

struct RLConfig {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double anneal_fraction = 0.5;  // of all training steps
  std::size_t episodes = 500;
  std::uint64_t seed = 0;

  void validate() const;
  // Linear decay from start to end over the first anneal_fraction of steps.
  double epsilon(std::size_t step, std::size_t total_steps) const;
  bool operator==(const RLConfig&) const = default;
};

// 1{true_beam in topk} - c_gps - sum of the acquired modality costs.
double reward(std::span<const std::size_t> topk, std::size_t true_beam, Action action, const CostSpec& costs);

// Uniform random action with probability epsilon, else the greedy action.
Action select_action(const PolicyTable& q, const AgentState& s, double epsilon, Rng& rng);

// Q[s,a] += alpha (r + gamma max_a' Q[s',a'] - Q[s,a]); a missing next
// state marks the end of an episode (no bootstrap).
void q_update(PolicyTable& q, const AgentState& s, Action a, double r, const std::optional<AgentState>& next,
              double alpha, double gamma);

// CSV: state_id,action_id,q_value
void write_policy_csv(std::ostream& out, const PolicyTable& q);
PolicyTable read_policy_csv(std::istream& in);
// CSV: episode,mean_reward
void write_reward_curve_csv(std::ostream& out, std::span<const double> curve);

}  // namespace wccf

#endif  // WCCF_POLICY_HPP
