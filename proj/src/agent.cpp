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

#include "agent.hpp"

#include <algorithm>

namespace wccf {

std::span<const ContextToken> ContextDelivery::begin_step(double now, std::optional<ContextToken> prior) {
  store_.sweep(now);
  if (prior) store_.insert(std::move(*prior), now);
  return store_.tokens();
}

void ContextDelivery::end_step(double now, std::vector<ContextToken> acquired) {
  for (auto& tok : acquired) store_.insert(std::move(tok), now);
}

ContextToken radio_map_token(const ModelParams& model, std::size_t bucket, double now) {
  ContextToken tok;
  tok.embedding = model.radio_map.row(static_cast<Eigen::Index>(bucket)).transpose();
  tok.tag = TokenTag::RadioMap;
  tok.timestamp = now;
  tok.ttl = TtlClass::Static;
  return tok;
}

std::vector<StepLog> run_episode(const EpisodeRecord& episode, const AgentSetup& setup, const ActionChooser& choose,
                                 const TransitionSink& on_transition) {
  if (!setup.model) fail(ErrorCode::Contract, "run_episode: no model");
  const ModelParams& model = *setup.model;
  const std::size_t max_history = model.shape.max_seq - kFixedSlots;
  if (setup.store.budget > max_history) fail(ErrorCode::Contract, "store budget exceeds the model's history slots");

  std::vector<StepLog> logs;
  if (episode.steps.size() < 2) return logs;
  logs.reserve(episode.steps.size() - 1);

  ContextDelivery delivery(setup.store);
  double prev_top1 = 0.0;
  Action prev_action = Action::None;
  std::optional<std::pair<AgentState, std::pair<Action, double>>> pending;

  for (std::size_t t = 0; t + 1 < episode.steps.size(); ++t) {
    const StepRecord& rec = episode.steps[t];
    const Observation gps = rec.observation(Modality::Gps);

    AgentState state;
    state.position_bucket = road_bucket(gps.features[0], setup.env.mobility, kPositionBuckets);
    state.belief = belief_bucket(prev_top1, setup.thresholds);
    state.prev_action = prev_action;

    if (pending && on_transition) on_transition(pending->first, pending->second.first, pending->second.second, state);

    std::optional<ContextToken> prior;
    if (t == 0)
      prior = radio_map_token(model, road_bucket(gps.features[0], setup.env.mobility, model.shape.radio_map_buckets),
                              rec.t);
    const auto history = delivery.begin_step(rec.t, std::move(prior));

    const Action action = choose(state);
    std::optional<Observation> image, lidar;
    if (acquires_image(action)) image = rec.observation(Modality::Image);
    if (acquires_lidar(action)) lidar = rec.observation(Modality::Lidar);

    const auto seq = build_sequence(gps, image, lidar, history, model.encoders, max_history);
    const Prediction pred = predict(seq, model, setup.top_k);

    StepLog log;
    log.step = t;
    log.state = state;
    log.action = action;
    log.topk = pred.topk;
    log.true_beam = static_cast<std::size_t>(episode.steps[t + 1].beam);
    log.correct = std::find(pred.topk.begin(), pred.topk.end(), log.true_beam) != pred.topk.end();
    log.reward = reward(pred.topk, log.true_beam, action, setup.costs);
    log.cost = step_cost(action, setup.costs);
    log.top1_prob = pred.top1_prob;
    log.history_tokens = history.size();

    std::vector<ContextToken> acquired;
    acquired.push_back(seq[1]);
    if (image) acquired.push_back(seq[2]);
    if (lidar) acquired.push_back(seq[3]);
    delivery.end_step(rec.t, std::move(acquired));

    pending = {{state, {action, log.reward}}};
    prev_top1 = pred.top1_prob;
    prev_action = action;
    logs.push_back(std::move(log));
  }
  if (pending && on_transition) on_transition(pending->first, pending->second.first, pending->second.second, std::nullopt);
  return logs;
}

}  // namespace wccf
