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

#include "env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace wccf {

namespace {

double db_to_linear(double db) { return std::pow(10.0, -db / 10.0); }

double squared_distance(Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return dx * dx + dy * dy;
}

double normal(Rng& rng, double sigma) {
  if (sigma == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

bool bernoulli(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

BeamCodebook BeamCodebook::uniform(std::size_t num_beams, double min_deg, double max_deg,
                                   double beamwidth_sigma) {
  if (num_beams == 0) fail(ErrorCode::Contract, "codebook needs at least one beam");
  BeamCodebook cb;
  cb.beamwidth_sigma = beamwidth_sigma;
  cb.angles.resize(num_beams);
  if (num_beams == 1) {
    cb.angles[0] = 0.5 * (min_deg + max_deg);
  } else {
    const double step = (max_deg - min_deg) / static_cast<double>(num_beams - 1);
    for (std::size_t i = 0; i < num_beams; ++i) cb.angles[i] = min_deg + step * static_cast<double>(i);
  }
  cb.validate();
  return cb;
}

double BeamCodebook::spacing() const {
  if (angles.size() < 2) return 0.0;
  return (angles.back() - angles.front()) / static_cast<double>(angles.size() - 1);
}

void BeamCodebook::validate() const {
  if (angles.empty()) fail(ErrorCode::Contract, "codebook is empty");
  if (!(beamwidth_sigma > 0.0)) fail(ErrorCode::Contract, "beamwidth_sigma must be positive");
  for (std::size_t i = 1; i < angles.size(); ++i)
    if (!(angles[i] > angles[i - 1])) fail(ErrorCode::Contract, "codebook angles must be strictly increasing");
}

void EnvConfig::validate() const {
  codebook();
  const auto& m = mobility;
  if (!(m.dt > 0.0)) fail(ErrorCode::Config, "env.dt must be positive");
  if (m.episode_steps <= 0) fail(ErrorCode::Config, "env.episode_steps must be positive");
  if (!(m.speed_min > 0.0 && m.speed_min <= m.speed_max))
    fail(ErrorCode::Config, "env speed bounds must satisfy 0 < min <= max");
  if (!(m.x_min < m.x_max)) fail(ErrorCode::Config, "env.x_min must be below env.x_max");
  if (!(m.spawn_x_min <= m.spawn_x_max && m.spawn_x_min >= m.x_min && m.spawn_x_max <= m.x_max))
    fail(ErrorCode::Config, "spawn interval must lie inside the road");
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::Config, std::string(name) + " must be in [0,1]");
  };
  prob(blockage.p_on, "env.p_on");
  prob(blockage.p_off, "env.p_off");
  prob(noise.image_flip_prob, "noise.image_flip_prob");
  prob(noise.lidar_miss_prob, "noise.lidar_miss_prob");
  if (paths.los_blocked_attenuation_db < 0.0 || paths.reflection_loss_db < 0.0)
    fail(ErrorCode::Config, "path attenuations must be nonnegative");
  if (!(blockage.half_width > 0.0)) fail(ErrorCode::Config, "env.blocker_half_width must be positive");
  if (!(noise.lidar_cell_width > 0.0)) fail(ErrorCode::Config, "noise.lidar_cell_width must be positive");
  for (double s : {noise.gps_sigma, noise.image_center_sigma, noise.image_width_sigma,
                   noise.image_clutter_sigma, noise.lidar_sigma, noise.lidar_range_sigma,
                   mobility.speed_noise, blockage.drift, blockage.spawn_spread})
    if (!(s >= 0.0)) fail(ErrorCode::Config, "noise magnitudes must be nonnegative");
  const double by = paths.base_station.y;
  if (!((paths.blocker_lane_y - by) * (m.road_y - paths.blocker_lane_y) > 0.0))
    fail(ErrorCode::Config, "blocker lane must lie strictly between base station and road");
  if (paths.reflector_line_y == m.road_y) fail(ErrorCode::Config, "reflector cannot coincide with the road");
}

double los_angle(Point bs, Point veh) {
  if (bs == veh) fail(ErrorCode::Geometry, "los_angle: coincident base station and vehicle");
  const double deg = std::atan2(veh.y - bs.y, veh.x - bs.x) * 180.0 / std::numbers::pi;
  return deg == -180.0 ? 180.0 : deg;
}

double beam_gain(double beam_angle, double path_angle, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorCode::Contract, "beam_gain: sigma must be positive");
  const double r = (beam_angle - path_angle) / sigma;
  return std::exp(-r * r);
}

double los_lane_crossing(Point bs, Point veh, double lane_y) {
  const double s = (lane_y - bs.y) / (veh.y - bs.y);
  return bs.x + s * (veh.x - bs.x);
}

bool los_blocked(const WorldState& world, const PathModel& paths) {
  if (!world.blocker_active) return false;
  const double xc = los_lane_crossing(paths.base_station, world.vehicle, paths.blocker_lane_y);
  return std::abs(xc - world.blocker_center_x) <= world.blocker_half_width;
}

std::vector<double> beam_powers(const WorldState& world, const BeamCodebook& codebook,
                                const PathModel& paths) {
  const Point bs = paths.base_station;
  const Point veh = world.vehicle;
  const Point mirrored{veh.x, 2.0 * paths.reflector_line_y - veh.y};

  const double los_att = los_blocked(world, paths) ? db_to_linear(paths.los_blocked_attenuation_db) : 1.0;
  const double los_path_gain = los_att / squared_distance(bs, veh);
  const double refl_path_gain = db_to_linear(paths.reflection_loss_db) / squared_distance(bs, mirrored);
  const double los_deg = los_angle(bs, veh);
  const double refl_deg = los_angle(bs, mirrored);

  std::vector<double> power(codebook.size());
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    const double a = codebook.angles[i];
    power[i] = std::max(los_path_gain * beam_gain(a, los_deg, codebook.beamwidth_sigma),
                        refl_path_gain * beam_gain(a, refl_deg, codebook.beamwidth_sigma));
  }
  return power;
}

std::size_t best_beam(const WorldState& world, const BeamCodebook& codebook, const PathModel& paths) {
  const auto power = beam_powers(world, codebook, paths);
  std::size_t best = 0;
  for (std::size_t i = 1; i < power.size(); ++i)
    if (power[i] > power[best]) best = i;
  return best;
}

WorldState initial_state(const EnvConfig& cfg, std::uint64_t seed) {
  WorldState w;
  w.rng.seed(seed);
  const auto& m = cfg.mobility;
  w.vehicle = {std::uniform_real_distribution<double>(m.spawn_x_min, m.spawn_x_max)(w.rng), m.road_y};
  w.speed = std::uniform_real_distribution<double>(m.speed_min, m.speed_max)(w.rng);
  const auto& b = cfg.blockage;
  const double stationary_on = (b.p_on + b.p_off) > 0.0 ? b.p_on / (b.p_on + b.p_off) : 0.0;
  w.blocker_active = bernoulli(w.rng, stationary_on);
  const double xc = los_lane_crossing(cfg.paths.base_station, w.vehicle, cfg.paths.blocker_lane_y);
  w.blocker_center_x = xc + std::uniform_real_distribution<double>(-b.spawn_spread, b.spawn_spread)(w.rng);
  w.blocker_half_width = b.half_width;
  return w;
}

WorldState advance_state(const WorldState& world, double dt, const EnvConfig& cfg) {
  if (!(dt > 0.0)) fail(ErrorCode::Contract, "advance_state: dt must be positive");
  WorldState next = world;
  const auto& m = cfg.mobility;
  const auto& b = cfg.blockage;

  next.time = world.time + dt;
  next.vehicle.x = world.vehicle.x + world.speed * dt;
  if (next.vehicle.x >= m.x_max || next.vehicle.x <= m.x_min) {
    next.vehicle.x = std::clamp(next.vehicle.x, m.x_min, m.x_max);
    next.terminated = true;
  }

  const double shock = normal(next.rng, m.speed_noise * std::sqrt(dt));
  next.speed = std::clamp(world.speed + m.speed_reversion * (m.speed_mean - world.speed) * dt + shock,
                          m.speed_min, m.speed_max);

  // The blocker rides along the lane roughly keeping pace with the LoS
  // crossing point, so an active blocker tends to stay in the way.
  const double lane_ratio = (cfg.paths.blocker_lane_y - cfg.paths.base_station.y) /
                            (m.road_y - cfg.paths.base_station.y);
  if (world.blocker_active) {
    if (bernoulli(next.rng, b.p_off)) {
      next.blocker_active = false;
    } else {
      next.blocker_center_x += lane_ratio * next.speed * dt + normal(next.rng, b.drift);
    }
  } else if (bernoulli(next.rng, b.p_on)) {
    next.blocker_active = true;
    const double xc = los_lane_crossing(cfg.paths.base_station, next.vehicle, cfg.paths.blocker_lane_y);
    next.blocker_center_x =
        xc + std::uniform_real_distribution<double>(-b.spawn_spread, b.spawn_spread)(next.rng);
  }
  return next;
}

void Observation::validate() const {
  if (features.size() != feature_dim(modality))
    fail(ErrorCode::Schema, std::string(to_string(modality)) + " observation has " +
                                std::to_string(features.size()) + " features, expected " +
                                std::to_string(feature_dim(modality)));
}

std::array<double, 3> lidar_occupancy(const WorldState& world, const PathModel& paths, double cell_width) {
  std::array<double, 3> occ{};
  if (!world.blocker_active) return occ;
  const double xc = los_lane_crossing(paths.base_station, world.vehicle, paths.blocker_lane_y);
  const double lo_b = world.blocker_center_x - world.blocker_half_width;
  const double hi_b = world.blocker_center_x + world.blocker_half_width;
  for (int k = 0; k < 3; ++k) {
    const double lo = xc + (k - 1.5) * cell_width;
    const double hi = lo + cell_width;
    occ[k] = std::max(0.0, std::min(hi, hi_b) - std::max(lo, lo_b)) / cell_width;
  }
  return occ;
}

Observation observe(const WorldState& world, Modality modality, const EnvConfig& cfg, Rng& rng) {
  const auto& n = cfg.noise;
  Observation obs;
  obs.modality = modality;
  obs.timestamp = world.time;
  switch (modality) {
    case Modality::Gps:
      obs.features = {world.vehicle.x + normal(rng, n.gps_sigma), world.vehicle.y + normal(rng, n.gps_sigma)};
      break;
    case Modality::Image: {
      const bool flip = bernoulli(rng, n.image_flip_prob);
      const bool active = world.blocker_active;
      obs.features = {(active != flip) ? 1.0 : 0.0,
                      (active ? world.blocker_center_x : 0.0) + normal(rng, n.image_center_sigma),
                      (active ? 2.0 * world.blocker_half_width : 0.0) + normal(rng, n.image_width_sigma),
                      normal(rng, n.image_clutter_sigma)};
      break;
    }
    case Modality::Lidar: {
      const bool missed = bernoulli(rng, n.lidar_miss_prob);
      const double px = world.vehicle.x + normal(rng, n.lidar_sigma);
      const double py = world.vehicle.y + normal(rng, n.lidar_sigma);
      std::array<double, 3> occ{};
      if (!missed) occ = lidar_occupancy(world, cfg.paths, n.lidar_cell_width);
      obs.features = {px, py, occ[0], occ[1], occ[2], normal(rng, n.lidar_range_sigma)};
      break;
    }
  }
  return obs;
}

Observation StepRecord::observation(Modality m) const {
  Observation obs;
  obs.modality = m;
  obs.timestamp = t;
  switch (m) {
    case Modality::Gps: obs.features.assign(gps.begin(), gps.end()); break;
    case Modality::Image: obs.features.assign(image.begin(), image.end()); break;
    case Modality::Lidar: obs.features.assign(lidar.begin(), lidar.end()); break;
  }
  return obs;
}

std::size_t road_bucket(double x, const MobilityConfig& mobility, std::size_t buckets) {
  if (buckets == 0) fail(ErrorCode::Contract, "road_bucket: zero buckets");
  const double u = (x - mobility.x_min) / (mobility.x_max - mobility.x_min);
  const double b = std::floor(u * static_cast<double>(buckets));
  if (!(b > 0.0)) return 0;  // also catches NaN
  return std::min(static_cast<std::size_t>(b), buckets - 1);
}

EpisodeRecord rollout_episode(const EnvConfig& cfg, std::uint64_t seed) {
  const BeamCodebook codebook = cfg.codebook();
  WorldState world = initial_state(cfg, seed);
  Rng obs_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  EpisodeRecord rec;
  rec.steps.reserve(static_cast<std::size_t>(cfg.mobility.episode_steps));
  for (int step = 0; step < cfg.mobility.episode_steps; ++step) {
    StepRecord s;
    s.t = world.time;
    s.x = world.vehicle.x;
    s.speed = world.speed;
    s.blocked = los_blocked(world, cfg.paths);
    const auto gps = observe(world, Modality::Gps, cfg, obs_rng);
    const auto img = observe(world, Modality::Image, cfg, obs_rng);
    const auto lid = observe(world, Modality::Lidar, cfg, obs_rng);
    std::copy(gps.features.begin(), gps.features.end(), s.gps.begin());
    std::copy(img.features.begin(), img.features.end(), s.image.begin());
    std::copy(lid.features.begin(), lid.features.end(), s.lidar.begin());
    s.beam = static_cast<int>(best_beam(world, codebook, cfg.paths));
    rec.steps.push_back(s);
    if (world.terminated) break;
    world = advance_state(world, cfg.mobility.dt, cfg);
  }
  return rec;
}

std::vector<EpisodeRecord> generate_episodes(const EnvConfig& cfg, Stream stream, std::uint64_t seed,
                                             std::size_t count) {
  std::vector<EpisodeRecord> out;
  out.reserve(count);
  for (std::size_t e = 0; e < count; ++e) out.push_back(rollout_episode(cfg, derive_seed(stream, seed, e)));
  return out;
}

}  // namespace wccf
