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

#include "policy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace wccf {

void CostSpec::validate() const {
  if (!(gps >= 0.0 && image >= 0.0 && lidar >= 0.0)) fail(ErrorCode::Config, "acquisition costs must be nonnegative");
}

double step_cost(Action a, const CostSpec& costs) {
  double c = costs.gps;
  if (acquires_image(a)) c += costs.image;
  if (acquires_lidar(a)) c += costs.lidar;
  return c;
}

std::size_t belief_bucket(double top1_prob, const BeliefThresholds& th) {
  if (top1_prob < th.low) return 0;
  if (top1_prob > th.high) return 2;
  return 1;
}

std::size_t AgentState::index() const {
  if (position_bucket >= kPositionBuckets || belief >= kBeliefBuckets || index_of(prev_action) >= kNumActions)
    fail(ErrorCode::Contract, "agent state component out of range");
  return (position_bucket * kBeliefBuckets + belief) * kNumActions + index_of(prev_action);
}

AgentState AgentState::from_index(std::size_t id) {
  if (id >= kNumStates) fail(ErrorCode::Contract, "state id " + std::to_string(id) + " out of range");
  AgentState s;
  s.prev_action = action_from_index(id % kNumActions);
  s.belief = (id / kNumActions) % kBeliefBuckets;
  s.position_bucket = id / (kNumActions * kBeliefBuckets);
  return s;
}

Action PolicyTable::greedy(std::size_t state) const {
  const auto r = row(state);
  return action_from_index(static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin()));
}

double PolicyTable::max_value(std::size_t state) const {
  const auto r = row(state);
  return *std::max_element(r.begin(), r.end());
}

bool PolicyTable::all_finite() const {
  return std::all_of(q_.begin(), q_.end(), [](double v) { return std::isfinite(v); });
}

void RLConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::Config, "rl.alpha must be in (0,1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail(ErrorCode::Config, "rl.gamma must be in [0,1]");
  for (double e : {epsilon_start, epsilon_end, anneal_fraction})
    if (!(e >= 0.0 && e <= 1.0)) fail(ErrorCode::Config, "rl epsilon schedule values must be in [0,1]");
}

double RLConfig::epsilon(std::size_t step, std::size_t total_steps) const {
  const double horizon = anneal_fraction * static_cast<double>(total_steps);
  if (horizon <= 0.0 || static_cast<double>(step) >= horizon) return epsilon_end;
  const double frac = static_cast<double>(step) / horizon;
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

double reward(std::span<const std::size_t> topk, std::size_t true_beam, Action action, const CostSpec& costs) {
  if (topk.size() != 3) fail(ErrorCode::Contract, "reward: expected a top-3 set, got " + std::to_string(topk.size()));
  const bool hit = std::find(topk.begin(), topk.end(), true_beam) != topk.end();
  return (hit ? 1.0 : 0.0) - step_cost(action, costs);
}

Action select_action(const PolicyTable& q, const AgentState& s, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail(ErrorCode::Contract, "select_action: epsilon outside [0,1]");
  // One uniform draw decides exploration; a second picks the random action.
  if (epsilon > 0.0 && std::bernoulli_distribution(epsilon)(rng))
    return action_from_index(std::uniform_int_distribution<std::size_t>(0, kNumActions - 1)(rng));
  return q.greedy(s.index());
}

void q_update(PolicyTable& q, const AgentState& s, Action a, double r, const std::optional<AgentState>& next,
              double alpha, double gamma) {
  const double bootstrap = next ? gamma * q.max_value(next->index()) : 0.0;
  double& v = q.at(s.index(), a);
  v += alpha * (r + bootstrap - v);
}

void write_policy_csv(std::ostream& out, const PolicyTable& q) {
  out << "state_id,action_id,q_value\n";
  char buf[64];
  for (std::size_t s = 0; s < kNumStates; ++s) {
    for (std::size_t a = 0; a < kNumActions; ++a) {
      const auto res = std::to_chars(buf, buf + sizeof buf, q.at(s, action_from_index(a)));
      out << s << ',' << a << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
    }
  }
}

PolicyTable read_policy_csv(std::istream& in) {
  PolicyTable q;
  std::vector<bool> seen(kNumStates * kNumActions, false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "state_id,action_id,q_value") fail(ErrorCode::Schema, "policy CSV: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      fail(ErrorCode::Schema, "policy CSV line " + std::to_string(line_no) + ": expected three fields");
    std::size_t s = 0, a = 0;
    double v = 0.0;
    const char* b = line.data();
    const auto r1 = std::from_chars(b, b + c1, s);
    const auto r2 = std::from_chars(b + c1 + 1, b + c2, a);
    const auto r3 = std::from_chars(b + c2 + 1, b + line.size(), v);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || r3.ec != std::errc{} || r1.ptr != b + c1 ||
        r2.ptr != b + c2 || r3.ptr != b + line.size())
      fail(ErrorCode::Schema, "policy CSV line " + std::to_string(line_no) + ": malformed number");
    if (s >= kNumStates || a >= kNumActions)
      fail(ErrorCode::Schema, "policy CSV line " + std::to_string(line_no) + ": index out of range");
    if (!std::isfinite(v)) fail(ErrorCode::Schema, "policy CSV line " + std::to_string(line_no) + ": non-finite value");
    q.at(s, action_from_index(a)) = v;
    seen[s * kNumActions + a] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    fail(ErrorCode::Schema, "policy CSV does not cover every (state, action) pair");
  return q;
}

void write_reward_curve_csv(std::ostream& out, std::span<const double> curve) {
  out << "episode,mean_reward\n";
  char buf[64];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto res = std::to_chars(buf, buf + sizeof buf, curve[i]);
    out << i << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
}

}  // namespace wccf
