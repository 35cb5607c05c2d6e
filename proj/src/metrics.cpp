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

#include "metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace wccf {

std::optional<Action> baseline_action(std::string_view name) {
  if (name == kOnlyGps) return Action::None;
  if (name == kMissingImage) return Action::Lidar;
  if (name == kMissingLidar) return Action::Image;
  if (name == kFullObservation) return Action::Both;
  return std::nullopt;
}

MetricsReport summarize(std::string name, std::span<const StepLog> logs, std::size_t budget, std::size_t episodes,
                        std::span<const std::uint64_t> seeds) {
  MetricsReport r;
  r.name = std::move(name);
  r.episodes = episodes;
  r.seeds.assign(seeds.begin(), seeds.end());
  r.steps = logs.size();
  if (logs.empty()) return r;
  double correct = 0, reward = 0, util = 0;
  std::array<std::size_t, kNumActions> count{};
  std::array<double, kNumActions> cost{};
  for (const auto& l : logs) {
    correct += l.correct ? 1.0 : 0.0;
    reward += l.reward;
    count[index_of(l.action)] += 1;
    cost[index_of(l.action)] = l.cost;
    util += budget == 0 ? 0.0 : static_cast<double>(l.history_tokens) / static_cast<double>(budget);
  }
  const double n = static_cast<double>(logs.size());
  r.accuracy = correct / n;
  r.mean_reward = reward / n;
  // Cost from per-action frequencies so that a constant action reports its
  // cost exactly.
  for (std::size_t a = 0; a < kNumActions; ++a) {
    const double frac = static_cast<double>(count[a]) / n;
    if (acquires_image(action_from_index(a))) r.image_usage += frac;
    if (acquires_lidar(action_from_index(a))) r.lidar_usage += frac;
    if (count[a]) r.mean_cost += frac * cost[a];
  }
  r.context_utilization = util / n;
  return r;
}

MetricsReport evaluate(const AgentSetup& setup, const EvalTarget& target, std::size_t episodes,
                       std::span<const std::uint64_t> seeds, std::vector<StepLog>* logs) {
  if (!target.fixed && !target.policy) fail(ErrorCode::Contract, "evaluate: '" + target.name + "' has no policy");
  ActionChooser choose;
  if (target.fixed) {
    const Action a = *target.fixed;
    choose = [a](const AgentState&) { return a; };
  } else {
    const PolicyTable* q = target.policy;
    choose = [q](const AgentState& s) { return q->greedy(s.index()); };
  }
  std::vector<StepLog> all;
  for (const std::uint64_t seed : seeds) {
    for (const auto& ep : generate_episodes(setup.env, Stream::Evaluation, seed, episodes)) {
      auto part = run_episode(ep, setup, choose);
      all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  }
  auto report = summarize(target.name, all, setup.store.budget, episodes, seeds);
  if (logs) *logs = std::move(all);
  return report;
}

double information_density(const MetricsReport& a, const MetricsReport& b) {
  if (a.seeds != b.seeds || a.episodes != b.episodes)
    fail(ErrorCode::Contract, "information_density: reports were evaluated on different episodes");
  const double dc = a.mean_cost - b.mean_cost;
  if (dc == 0.0) fail(ErrorCode::Undefined, "information_density: reports have equal mean cost");
  return (a.accuracy - b.accuracy) / dc;
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_metrics_csv(std::ostream& out, std::span<const MetricsReport> reports) {
  out << "configuration,top3_accuracy,mean_reward,image_usage,lidar_usage,mean_cost,context_utilization,episodes,seeds\n";
  for (const auto& r : reports) {
    out << r.name << ',';
    put(out, r.accuracy);
    out << ',';
    put(out, r.mean_reward);
    out << ',';
    put(out, r.image_usage);
    out << ',';
    put(out, r.lidar_usage);
    out << ',';
    put(out, r.mean_cost);
    out << ',';
    put(out, r.context_utilization);
    out << ',' << r.episodes << ',';
    for (std::size_t i = 0; i < r.seeds.size(); ++i) out << (i ? ";" : "") << r.seeds[i];
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed to write metrics CSV");
}

}  // namespace wccf
