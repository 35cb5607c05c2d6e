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

// Synthetic V2I world: a roadside base station at the origin serves a vehicle
// driving along a straight road. The line-of-sight (LoS) path can be cut by a
// blocker travelling in a lane between the base station and the road; a
// single specular reflection off a wall behind the road is always present.

#ifndef WCCF_ENV_HPP
#define WCCF_ENV_HPP

#include <array>
#include <vector>

#include "common.hpp"

namespace wccf {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct BeamCodebook {
  std::vector<double> angles;  // boresight angles in degrees, strictly increasing
  double beamwidth_sigma = 3.0;

  static BeamCodebook uniform(std::size_t num_beams, double min_deg, double max_deg,
                              double beamwidth_sigma);

  std::size_t size() const { return angles.size(); }
  // Angular spacing between neighbouring beams (0 for a single beam).
  double spacing() const;
  void validate() const;
};

struct PathModel {
  double los_blocked_attenuation_db = 20.0;
  double reflection_loss_db = 6.0;
  double reflector_line_y = 40.0;
  double blocker_lane_y = 10.0;
  Point base_station{0.0, 0.0};
  bool operator==(const PathModel&) const = default;
};

struct MobilityConfig {
  double road_y = 20.0;
  double x_min = -100.0;
  double x_max = 100.0;
  double spawn_x_min = -100.0;
  double spawn_x_max = -80.0;
  double speed_min = 5.0;
  double speed_max = 15.0;
  double speed_mean = 10.0;
  double speed_reversion = 0.5;  // 1/s
  double speed_noise = 1.0;      // m/s per sqrt(s)
  double dt = 0.1;
  int episode_steps = 200;
  bool operator==(const MobilityConfig&) const = default;
};

struct BlockageConfig {
  double p_on = 0.05;
  double p_off = 0.05;
  double half_width = 4.0;
  double spawn_spread = 2.0;  // blocker appears within +-spread of the LoS crossing
  double drift = 0.5;         // per-step random walk of the blocker centre, m
  bool operator==(const BlockageConfig&) const = default;
};

struct ObservationNoise {
  double gps_sigma = 11.0;
  double image_flip_prob = 0.1;
  double image_center_sigma = 3.0;
  double image_width_sigma = 1.0;
  double image_clutter_sigma = 1.0;
  double lidar_sigma = 20.0;
  double lidar_miss_prob = 0.6;
  double lidar_cell_width = 4.0;
  double lidar_range_sigma = 0.2;
  bool operator==(const ObservationNoise&) const = default;
};

struct EnvConfig {
  std::size_t num_beams = 32;
  double angle_min_deg = 10.0;
  double angle_max_deg = 170.0;
  double beamwidth_sigma = 3.0;
  PathModel paths;
  MobilityConfig mobility;
  BlockageConfig blockage;
  ObservationNoise noise;

  BeamCodebook codebook() const {
    return BeamCodebook::uniform(num_beams, angle_min_deg, angle_max_deg, beamwidth_sigma);
  }
  void validate() const;
  bool operator==(const EnvConfig&) const = default;
};

struct WorldState {
  double time = 0.0;
  Point vehicle{0.0, 20.0};
  double speed = 10.0;
  bool blocker_active = false;
  double blocker_center_x = 0.0;
  double blocker_half_width = 4.0;
  bool terminated = false;
  Rng rng{0};
};

WorldState initial_state(const EnvConfig& cfg, std::uint64_t seed);

// Moves the vehicle by speed*dt, perturbs the speed (mean reverting, clamped)
// and steps the two-state blockage chain. Reaching either end of the road
// clamps the position and sets `terminated`.
WorldState advance_state(const WorldState& world, double dt, const EnvConfig& cfg);

// Angle of the segment bs->veh in degrees, in (-180, 180].
double los_angle(Point bs, Point veh);

// Gaussian beam pattern exp(-(d/sigma)^2), d = beam_angle - path_angle.
double beam_gain(double beam_angle, double path_angle, double sigma);

// x coordinate where the LoS segment crosses the blocker lane.
double los_lane_crossing(Point bs, Point veh, double lane_y);

bool los_blocked(const WorldState& world, const PathModel& paths);

// Per-beam received power: max over {LoS, reflected} of path gain times
// beam gain.
std::vector<double> beam_powers(const WorldState& world, const BeamCodebook& codebook,
                                const PathModel& paths);

// Index of the strongest beam; ties resolve to the lowest index.
std::size_t best_beam(const WorldState& world, const BeamCodebook& codebook,
                      const PathModel& paths);

struct Observation {
  Modality modality = Modality::Gps;
  std::vector<double> features;
  double timestamp = 0.0;

  void validate() const;
};

// Blocker occupancy of three lane cells centred on the LoS crossing, each as
// the covered fraction of the cell. All zero when the blocker is inactive.
std::array<double, 3> lidar_occupancy(const WorldState& world, const PathModel& paths,
                                      double cell_width);

Observation observe(const WorldState& world, Modality modality, const EnvConfig& cfg, Rng& rng);

struct StepRecord {
  double t = 0.0;
  double x = 0.0;
  double speed = 0.0;
  bool blocked = false;  // LoS currently blocked
  std::array<double, 2> gps{};
  std::array<double, 4> image{};
  std::array<double, 6> lidar{};
  int beam = 0;

  Observation observation(Modality m) const;
  bool operator==(const StepRecord&) const = default;
};

struct EpisodeRecord {
  std::vector<StepRecord> steps;
  bool operator==(const EpisodeRecord&) const = default;
};

// Uniform bucket of a road position; positions outside the road clamp to
// the first or last bucket.
std::size_t road_bucket(double x, const MobilityConfig& mobility, std::size_t buckets);

// Simulates one episode; every modality is observed at every step so that
// different acquisition strategies see the same noise realisation.
EpisodeRecord rollout_episode(const EnvConfig& cfg, std::uint64_t seed);

std::vector<EpisodeRecord> generate_episodes(const EnvConfig& cfg, Stream stream,
                                             std::uint64_t seed, std::size_t count);

}  // namespace wccf

#endif  // WCCF_ENV_HPP
