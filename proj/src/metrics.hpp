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

// Evaluation of fixed acquisition configurations and learned policies.

#ifndef WCCF_METRICS_HPP
#define WCCF_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agent.hpp"

namespace wccf {

struct MetricsReport {
  std::string name;
  double accuracy = 0.0;  // top-3
  double mean_reward = 0.0;
  double image_usage = 0.0;
  double lidar_usage = 0.0;
  double mean_cost = 0.0;
  double context_utilization = 0.0;  // mean(history tokens / budget)
  std::size_t episodes = 0;
  std::vector<std::uint64_t> seeds;
  std::size_t steps = 0;
};

// One evaluated configuration: a constant action or a greedy policy.
struct EvalTarget {
  std::string name;
  std::optional<Action> fixed;
  const PolicyTable* policy = nullptr;

  static EvalTarget constant(std::string name, Action a) { return {std::move(name), a, nullptr}; }
  static EvalTarget greedy(std::string name, const PolicyTable& q) { return {std::move(name), std::nullopt, &q}; }
};

// Names used on the command line and in the CSV.
inline constexpr const char* kOnlyGps = "Only_GPS";
inline constexpr const char* kMissingImage = "Missing_image";
inline constexpr const char* kMissingLidar = "Missing_LiDAR";
inline constexpr const char* kFullObservation = "Full_observation";
inline constexpr const char* kRlPolicy = "RL_policy";

// Fixed action of a named baseline, nullopt for the RL row or an unknown name.
std::optional<Action> baseline_action(std::string_view name);

// Episodes for seed s come from the Evaluation stream of s.
MetricsReport evaluate(const AgentSetup& setup, const EvalTarget& target, std::size_t episodes,
                       std::span<const std::uint64_t> seeds, std::vector<StepLog>* logs = nullptr);

MetricsReport summarize(std::string name, std::span<const StepLog> logs, std::size_t budget, std::size_t episodes,
                        std::span<const std::uint64_t> seeds);

// (accuracy_a - accuracy_b) / (cost_a - cost_b)
double information_density(const MetricsReport& a, const MetricsReport& b);

// configuration,top3_accuracy,mean_reward,image_usage,lidar_usage,mean_cost,context_utilization,episodes,seeds
void write_metrics_csv(std::ostream& out, std::span<const MetricsReport> reports);

}  // namespace wccf

#endif  // WCCF_METRICS_HPP
