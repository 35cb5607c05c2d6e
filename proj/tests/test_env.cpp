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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "env.hpp"
#include "support.hpp"

using namespace wccf;

namespace {

EnvConfig quiet_env() {
  EnvConfig c;
  c.mobility.speed_noise = 0.0;
  c.blockage.p_on = 0.0;
  c.blockage.p_off = 0.0;
  return c;
}

WorldState state_at(double x, bool blocker = false, double blocker_x = 0.0) {
  WorldState w;
  w.vehicle = {x, 20.0};
  w.blocker_active = blocker;
  w.blocker_center_x = blocker_x;
  return w;
}

// Independent received-power model: free-space LoS with optional 20 dB
// blockage loss, plus one reflection off y = 40 with 6 dB loss, seen
// through a Gaussian beam.
std::size_t brute_force_best(double x, bool los_blocked, const BeamCodebook& cb) {
  const double pi = std::numbers::pi;
  const double los_deg = std::atan2(20.0, x) * 180.0 / pi;
  const double refl_deg = std::atan2(60.0, x) * 180.0 / pi;
  const double los_p = (los_blocked ? 0.01 : 1.0) / (x * x + 400.0);
  const double refl_p = std::pow(10.0, -0.6) / (x * x + 3600.0);
  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const double a = cb.angles[i];
    const double g1 = std::exp(-std::pow((a - los_deg) / cb.beamwidth_sigma, 2));
    const double g2 = std::exp(-std::pow((a - refl_deg) / cb.beamwidth_sigma, 2));
    const double p = std::max(los_p * g1, refl_p * g2);
    if (p > best_p) {
      best_p = p;
      best = i;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("kinematics without perturbation") {
  const auto cfg = quiet_env();
  WorldState w = state_at(0.0);
  w.speed = 10.0;
  const auto next = advance_state(w, 0.1, cfg);
  CHECK(next.vehicle.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(next.vehicle.y == 20.0);
  CHECK(next.speed == doctest::Approx(10.0));
  CHECK_FALSE(next.blocker_active);
  CHECK(next.time == doctest::Approx(0.1));
}

TEST_CASE("advance_state rejects non-positive dt") {
  CHECK_THROWS_AS(advance_state(state_at(0.0), 0.0, EnvConfig{}), Error);
}

TEST_CASE("blocker stays off when p_on is zero") {
  EnvConfig cfg;
  cfg.blockage.p_on = 0.0;
  WorldState w = state_at(-50.0);
  for (int i = 0; i < 500; ++i) {
    w = advance_state(w, 0.1, cfg);
    REQUIRE_FALSE(w.blocker_active);
    if (w.terminated) w = state_at(-50.0);
  }
}

TEST_CASE("speed and position bounds over many steps") {
  const EnvConfig cfg;
  std::size_t steps = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    WorldState w = initial_state(cfg, seed);
    for (int i = 0; i < 10000; ++i) {
      w = advance_state(w, 0.1, cfg);
      REQUIRE(w.speed >= 5.0);
      REQUIRE(w.speed <= 15.0);
      REQUIRE(w.vehicle.x >= -100.0);
      REQUIRE(w.vehicle.x <= 100.0);
      ++steps;
      if (w.terminated) w = initial_state(cfg, seed * 100000 + static_cast<std::uint64_t>(i));
    }
  }
  CHECK(steps == 100000);
}

TEST_CASE("boundary crossing terminates") {
  const auto cfg = quiet_env();
  WorldState w = state_at(99.5);
  w.speed = 10.0;
  const auto next = advance_state(w, 0.1, cfg);
  CHECK(next.terminated);
  CHECK(next.vehicle.x == 100.0);
}

TEST_CASE("los_angle") {
  CHECK(los_angle({0, 0}, {0, 20}) == doctest::Approx(90.0));
  CHECK(los_angle({0, 0}, {20, 20}) == doctest::Approx(45.0));
  CHECK(los_angle({0, 0}, {-20, 20}) == doctest::Approx(135.0));
  CHECK(los_angle({0, 0}, {-20, 0}) == 180.0);
  CHECK(los_angle({0, 0}, {-20, -1e-300}) > -180.0);
  try {
    los_angle({1, 2}, {1, 2});
    FAIL("expected a geometry error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Geometry);
  }
}

TEST_CASE("beam_gain") {
  CHECK(beam_gain(90, 90, 3) == 1.0);
  CHECK(beam_gain(93, 90, 3) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(beam_gain(90, 93, 3) == beam_gain(90, 87, 3));
  Rng rng(1);
  std::uniform_real_distribution<double> a(-180, 180), s(0.1, 20);
  for (int i = 0; i < 1000; ++i) {
    const double g = beam_gain(a(rng), a(rng), s(rng));
    REQUIRE(g >= 0.0);
    REQUIRE(g <= 1.0);
  }
}

TEST_CASE("codebook geometry") {
  const auto cb = EnvConfig{}.codebook();
  CHECK(cb.size() == 32);
  CHECK(cb.angles.front() == 10.0);
  CHECK(cb.angles.back() == doctest::Approx(170.0));
  CHECK(std::is_sorted(cb.angles.begin(), cb.angles.end()));
  CHECK_THROWS_AS(BeamCodebook::uniform(0, 10, 170, 3), Error);
  CHECK_THROWS_AS(BeamCodebook::uniform(4, 10, 170, 0), Error);
}

TEST_CASE("vehicle straight ahead: neighbouring beams tie and the lower index wins") {
  const EnvConfig cfg;
  const auto cb = cfg.codebook();
  const auto p = beam_powers(state_at(0.0), cb, cfg.paths);
  // Beams 15 and 16 sit symmetrically around 90 degrees.
  CHECK(p[15] == p[16]);
  CHECK(best_beam(state_at(0.0), cb, cfg.paths) == 15);
  CHECK(brute_force_best(0.0, false, cb) == 15);
}

TEST_CASE("best beam matches the brute-force power model") {
  const EnvConfig cfg;
  const auto cb = cfg.codebook();
  Rng rng(3);
  std::uniform_real_distribution<double> ux(-100, 100), ub(-60, 60);
  for (int i = 0; i < 2000; ++i) {
    const double x = ux(rng);
    const bool active = i % 2 == 0;
    const auto w = state_at(x, active, active ? x / 2.0 + ub(rng) / 10.0 : 0.0);
    const bool blocked = los_blocked(w, cfg.paths);
    REQUIRE(best_beam(w, cb, cfg.paths) == brute_force_best(x, blocked, cb));
  }
}

TEST_CASE("blocked line of sight moves the best beam to the reflected path") {
  const EnvConfig cfg;
  const auto cb = cfg.codebook();
  for (double x : {-60.0, -20.0, 0.0, 30.0, 70.0}) {
    const auto w = state_at(x, true, x / 2.0);
    REQUIRE(los_blocked(w, cfg.paths));
    const double refl = los_angle({0, 0}, {x, 60.0});
    const auto b = best_beam(w, cb, cfg.paths);
    CHECK(std::abs(cb.angles[b] - refl) <= cb.spacing());
  }
}

TEST_CASE("unblocked best beam lies within one spacing of the line of sight") {
  const EnvConfig cfg;
  const auto cb = cfg.codebook();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const auto& s : rollout_episode(cfg, seed).steps) {
      if (s.blocked) continue;
      const double los = los_angle({0, 0}, {s.x, 20.0});
      REQUIRE(std::abs(cb.angles[static_cast<std::size_t>(s.beam)] - los) <= cb.spacing());
    }
  }
}

TEST_CASE("best beam is a pure function of the state") {
  const EnvConfig cfg;
  WorldState w = initial_state(cfg, 5);
  const auto a = best_beam(w, cfg.codebook(), cfg.paths);
  w.rng.discard(1000);
  CHECK(best_beam(w, cfg.codebook(), cfg.paths) == a);
}

TEST_CASE("observation noise switches") {
  EnvConfig cfg;
  cfg.noise.gps_sigma = 0.0;
  cfg.noise.image_flip_prob = 0.0;
  Rng rng(4);
  const auto w = state_at(12.5);
  const auto gps = observe(w, Modality::Gps, cfg, rng);
  CHECK(gps.features == std::vector<double>{12.5, 20.0});
  const auto img = observe(w, Modality::Image, cfg, rng);
  CHECK(img.features.size() == 4);
  CHECK(img.features[0] == 0.0);
  CHECK(observe(w, Modality::Lidar, cfg, rng).features.size() == 6);
}

TEST_CASE("lidar occupancy agrees with the blocker geometry") {
  const EnvConfig cfg;
  Rng rng(6);
  std::uniform_real_distribution<double> ux(-100, 100), off(-12, 12), hw(0.5, 8);
  for (int i = 0; i < 1000; ++i) {
    WorldState w = state_at(ux(rng), true);
    const double xc = w.vehicle.x * 10.0 / 20.0;
    w.blocker_center_x = xc + off(rng);
    w.blocker_half_width = hw(rng);
    const auto occ = lidar_occupancy(w, cfg.paths, 4.0);
    // Sample each cell on a fine grid and count covered points.
    for (int k = 0; k < 3; ++k) {
      const double lo = xc - 6.0 + 4.0 * k;
      int covered = 0;
      const int n = 4000;
      for (int j = 0; j < n; ++j) {
        const double px = lo + (j + 0.5) * 4.0 / n;
        covered += std::abs(px - w.blocker_center_x) <= w.blocker_half_width ? 1 : 0;
      }
      REQUIRE(occ[static_cast<std::size_t>(k)] == doctest::Approx(static_cast<double>(covered) / n).epsilon(1e-3));
    }
  }
  WorldState off_state = state_at(0.0, false);
  const auto zero = lidar_occupancy(off_state, cfg.paths, 4.0);
  CHECK(zero == std::array<double, 3>{0, 0, 0});
}

TEST_CASE("episodes are reproducible and respect their invariants") {
  const EnvConfig cfg;
  const auto a = generate_episodes(cfg, Stream::Dataset, 7, 3);
  const auto b = generate_episodes(cfg, Stream::Dataset, 7, 3);
  CHECK(a == b);
  CHECK(a != generate_episodes(cfg, Stream::Evaluation, 7, 3));
  for (const auto& ep : a) {
    REQUIRE_FALSE(ep.steps.empty());
    REQUIRE(ep.steps.size() <= 200);
    for (const auto& s : ep.steps) {
      REQUIRE(s.beam >= 0);
      REQUIRE(s.beam < 32);
    }
  }
}

TEST_CASE("road buckets") {
  const MobilityConfig m;
  CHECK(road_bucket(-100.0, m, 10) == 0);
  CHECK(road_bucket(-80.01, m, 10) == 0);
  CHECK(road_bucket(-80.0, m, 10) == 1);
  CHECK(road_bucket(99.9, m, 10) == 9);
  CHECK(road_bucket(100.0, m, 10) == 9);
  CHECK(road_bucket(-1e9, m, 10) == 0);
  CHECK(road_bucket(1e9, m, 10) == 9);
  CHECK(road_bucket(std::nan(""), m, 10) == 0);
}

TEST_CASE("configuration validation") {
  EnvConfig c;
  c.blockage.p_on = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = EnvConfig{};
  c.mobility.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = EnvConfig{};
  c.paths.blocker_lane_y = 30.0;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_NOTHROW(EnvConfig{}.validate());
}
