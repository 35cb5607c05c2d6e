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

#include <sstream>

#include "config.hpp"
#include "metrics.hpp"
#include "support.hpp"

using namespace wccf;
using wccf::test::code_of;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string error_text(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

}  // namespace

TEST_CASE("defaults survive a round trip") {
  const RunConfig def;
  CHECK(parse(serialize_config(def)) == def);
  CHECK(parse("") == def);
  CHECK(def.model_shape().num_beams == def.env.num_beams);
}

TEST_CASE("randomised configurations survive a round trip") {
  Rng rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::uint64_t> big(0, ~std::uint64_t{0});
  for (int rep = 0; rep < 300; ++rep) {
    RunConfig c;
    c.seed = big(rng);
    c.env.beamwidth_sigma = 0.5 + 5 * u(rng);
    c.env.mobility.speed_noise = u(rng) / 3.0;
    c.env.noise.gps_sigma = 20 * u(rng);
    c.env.noise.lidar_miss_prob = u(rng);
    c.env.blockage.p_on = u(rng);
    c.data_episodes = rep;
    c.train.learning_rate = 1e-4 + u(rng) * 1e-2;
    c.train.mask_prob = u(rng);
    c.rl.alpha = 0.01 + 0.99 * u(rng);
    c.rl.gamma = u(rng);
    c.costs.image = u(rng) * 0.1 + 0.2;
    c.store.ttl_fast = 0.1 + u(rng);
    c.store.weights[3] = u(rng);
    c.thresholds.low = 0.3 * u(rng);
    c.thresholds.high = 0.5 + 0.5 * u(rng);
    c.eval_seeds = {big(rng), 7};
    c.eval_configs = {kRlPolicy, kOnlyGps};
    const auto text = serialize_config(c);
    REQUIRE(parse(text) == c);
    REQUIRE(serialize_config(parse(text)) == text);
  }
}

TEST_CASE("comments, blank lines and whitespace") {
  const auto c = parse("# header\n\n  run.seed   =  17   # trailing\ncost.lidar=0.5\r\n\t\n");
  CHECK(c.seed == 17);
  CHECK(c.costs.lidar == 0.5);
  CHECK(c.costs.image == 0.1);
}

TEST_CASE("later lines override earlier ones") {
  CHECK(parse("run.seed = 1\nrun.seed = 2\n").seed == 2);
}

TEST_CASE("unknown keys and bad values name the line") {
  auto msg = error_text("run.seed = 1\n\nmodel.depth = 3\n");
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("model.depth") != std::string::npos);
  msg = error_text("train.epochs = ten\n");
  CHECK(msg.find("line 1") != std::string::npos);
  CHECK(msg.find("train.epochs") != std::string::npos);
  error_text("train.epochs = -1\n");
  error_text("train.epochs = 3.5\n");
  error_text("rl.alpha = 0.1x\n");
  error_text("run.seed\n");
  error_text("eval.seeds = 0, a\n");
}

TEST_CASE("semantic validation") {
  error_text("rl.alpha = 0\n");
  error_text("cost.image = -0.1\n");
  error_text("store.budget = 5\n");
  error_text("rl.belief_low = 0.8\nrl.belief_high = 0.7\n");
  error_text("eval.seeds =\n");
  error_text("eval.configs = Only_GPS, Half_observation\n");
  error_text("store.ttl_fast = 0\n");
  error_text("model.num_heads = 3\n");
}

TEST_CASE("lists") {
  const auto c = parse("eval.seeds = 4,2 , 9\neval.configs = Full_observation\n");
  CHECK(c.eval_seeds == std::vector<std::uint64_t>{4, 2, 9});
  CHECK(c.eval_configs == std::vector<std::string>{"Full_observation"});
}

TEST_CASE("component configs carry the run seed") {
  const auto c = parse("run.seed = 42\n");
  CHECK(c.train_config().seed == 42);
  CHECK(c.rl_config().seed == 42);
}

TEST_CASE("loading from disk") {
  const auto dir = wccf::test::scratch_dir("config");
  CHECK(code_of([&] { load_config((dir / "missing.cfg").string()); }) == ErrorCode::Io);
  {
    std::ofstream out(dir / "a.cfg");
    out << "run.seed = 3\n";
  }
  CHECK(load_config((dir / "a.cfg").string()).seed == 3);
}

TEST_CASE("the shipped default file matches the built-in defaults") {
  CHECK(load_config(WCCF_SOURCE_DIR "/configs/default.cfg") == RunConfig{});
}
