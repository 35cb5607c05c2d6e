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

#include "config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <variant>

#include "metrics.hpp"

namespace wccf {

namespace {

static_assert(std::is_same_v<std::size_t, std::uint64_t>);
using Slot = std::variant<double*, std::size_t*, int*, std::vector<std::uint64_t>*,
                          std::vector<std::string>*>;

std::vector<std::pair<std::string, Slot>> fields(RunConfig& c) {
  auto& e = c.env;
  auto& m = e.mobility;
  auto& b = e.blockage;
  auto& n = e.noise;
  auto& p = e.paths;
  auto& w = c.store.weights;
  auto weight = [&](TokenTag t) { return &w[static_cast<std::size_t>(t)]; };
  return {
      {"run.seed", &c.seed},
      {"env.num_beams", &e.num_beams},
      {"env.angle_min_deg", &e.angle_min_deg},
      {"env.angle_max_deg", &e.angle_max_deg},
      {"env.beamwidth_sigma", &e.beamwidth_sigma},
      {"env.los_blocked_attenuation_db", &p.los_blocked_attenuation_db},
      {"env.reflection_loss_db", &p.reflection_loss_db},
      {"env.reflector_line_y", &p.reflector_line_y},
      {"env.blocker_lane_y", &p.blocker_lane_y},
      {"env.base_station_x", &p.base_station.x},
      {"env.base_station_y", &p.base_station.y},
      {"mobility.road_y", &m.road_y},
      {"mobility.x_min", &m.x_min},
      {"mobility.x_max", &m.x_max},
      {"mobility.spawn_x_min", &m.spawn_x_min},
      {"mobility.spawn_x_max", &m.spawn_x_max},
      {"mobility.speed_min", &m.speed_min},
      {"mobility.speed_max", &m.speed_max},
      {"mobility.speed_mean", &m.speed_mean},
      {"mobility.speed_reversion", &m.speed_reversion},
      {"mobility.speed_noise", &m.speed_noise},
      {"mobility.dt", &m.dt},
      {"mobility.episode_steps", &m.episode_steps},
      {"blockage.p_on", &b.p_on},
      {"blockage.p_off", &b.p_off},
      {"blockage.half_width", &b.half_width},
      {"blockage.spawn_spread", &b.spawn_spread},
      {"blockage.drift", &b.drift},
      {"noise.gps_sigma", &n.gps_sigma},
      {"noise.image_flip_prob", &n.image_flip_prob},
      {"noise.image_center_sigma", &n.image_center_sigma},
      {"noise.image_width_sigma", &n.image_width_sigma},
      {"noise.image_clutter_sigma", &n.image_clutter_sigma},
      {"noise.lidar_sigma", &n.lidar_sigma},
      {"noise.lidar_miss_prob", &n.lidar_miss_prob},
      {"noise.lidar_cell_width", &n.lidar_cell_width},
      {"noise.lidar_range_sigma", &n.lidar_range_sigma},
      {"data.episodes", &c.data_episodes},
      {"model.d_model", &c.model.d_model},
      {"model.num_heads", &c.model.num_heads},
      {"model.num_blocks", &c.model.num_blocks},
      {"model.ffn_hidden", &c.model.ffn_hidden},
      {"model.max_seq", &c.model.max_seq},
      {"model.radio_map_buckets", &c.model.radio_map_buckets},
      {"train.learning_rate", &c.train.learning_rate},
      {"train.batch_size", &c.train.batch_size},
      {"train.epochs", &c.train.epochs},
      {"train.mask_prob", &c.train.mask_prob},
      {"train.beta1", &c.train.beta1},
      {"train.beta2", &c.train.beta2},
      {"train.adam_eps", &c.train.adam_eps},
      {"rl.alpha", &c.rl.alpha},
      {"rl.gamma", &c.rl.gamma},
      {"rl.epsilon_start", &c.rl.epsilon_start},
      {"rl.epsilon_end", &c.rl.epsilon_end},
      {"rl.anneal_fraction", &c.rl.anneal_fraction},
      {"rl.episodes", &c.rl.episodes},
      {"rl.belief_low", &c.thresholds.low},
      {"rl.belief_high", &c.thresholds.high},
      {"cost.gps", &c.costs.gps},
      {"cost.image", &c.costs.image},
      {"cost.lidar", &c.costs.lidar},
      {"store.budget", &c.store.budget},
      {"store.ttl_slow", &c.store.ttl_slow},
      {"store.ttl_fast", &c.store.ttl_fast},
      {"store.weight.gps", weight(TokenTag::Gps)},
      {"store.weight.image", weight(TokenTag::Image)},
      {"store.weight.lidar", weight(TokenTag::Lidar)},
      {"store.weight.cls", weight(TokenTag::Cls)},
      {"store.weight.missing_image", weight(TokenTag::MissingImage)},
      {"store.weight.missing_lidar", weight(TokenTag::MissingLidar)},
      {"store.weight.radio_map", weight(TokenTag::RadioMap)},
      {"eval.episodes", &c.eval_episodes},
      {"eval.seeds", &c.eval_seeds},
      {"eval.configs", &c.eval_configs},
  };
}

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& v, const std::string& where) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    fail(ErrorCode::Config, where + ": cannot parse '" + v + "'");
  return out;
}

template <class T>
std::string format_number(T v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void assign(const Slot& slot, const std::string& v, const std::string& where) {
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::vector<std::string>>) {
          *p = split_list(v);
        } else if constexpr (std::is_same_v<T, std::vector<std::uint64_t>>) {
          p->clear();
          for (const auto& s : split_list(v)) p->push_back(parse_number<std::uint64_t>(s, where));
        } else {
          *p = parse_number<T>(v, where);
        }
      },
      slot);
}

std::string render(const Slot& slot) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::vector<std::string>> || std::is_same_v<T, std::vector<std::uint64_t>>) {
          std::string s;
          for (std::size_t i = 0; i < p->size(); ++i) {
            if (i) s += ", ";
            if constexpr (std::is_same_v<T, std::vector<std::string>>)
              s += (*p)[i];
            else
              s += format_number((*p)[i]);
          }
          return s;
        } else {
          return format_number(*p);
        }
      },
      slot);
}

}  // namespace

ModelShape RunConfig::model_shape() const {
  ModelShape s = model;
  s.num_beams = env.num_beams;
  return s;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t = train;
  t.seed = seed;
  return t;
}

RLConfig RunConfig::rl_config() const {
  RLConfig r = rl;
  r.seed = seed;
  return r;
}

void RunConfig::validate() const {
  try {
    env.validate();
    model_shape().validate();
    train_config().validate();
    rl_config().validate();
    costs.validate();
    store.validate();
  } catch (const Error& e) {
    fail(ErrorCode::Config, e.what());
  }
  if (store.budget + kFixedSlots > model.max_seq)
    fail(ErrorCode::Config, "store.budget + 4 exceeds model.max_seq");
  if (!(thresholds.low >= 0.0 && thresholds.low <= thresholds.high && thresholds.high <= 1.0))
    fail(ErrorCode::Config, "rl.belief_low/high must satisfy 0 <= low <= high <= 1");
  if (eval_seeds.empty()) fail(ErrorCode::Config, "eval.seeds is empty");
  for (const auto& name : eval_configs)
    if (name != kRlPolicy && !baseline_action(name)) fail(ErrorCode::Config, "eval.configs: unknown configuration '" + name + "'");
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  const auto table = fields(cfg);
  std::map<std::string, const Slot*> index;
  for (const auto& [k, s] : table) index[k] = &s;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::Config, where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) fail(ErrorCode::Config, where + ": unknown key '" + key + "'");
    assign(*it->second, value, where + " (" + key + ")");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  std::string out;
  for (const auto& [k, s] : fields(copy)) out += k + " = " + render(s) + "\n";
  return out;
}

}  // namespace wccf
