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

// Command-line front end. Talks to the library through the C API only.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "wccf/wccf.h"

namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(wccf_status st, const std::string& what) {
  if (st == WCCF_OK) return;
  std::string msg = what + ": " + wccf_status_name(st);
  const std::string detail = wccf_last_error();
  if (!detail.empty()) msg += ": " + detail;
  throw Failure(msg);
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Config = std::unique_ptr<wccf_config, Deleter<wccf_config, wccf_config_free>>;
using Dataset = std::unique_ptr<wccf_dataset, Deleter<wccf_dataset, wccf_dataset_free>>;
using Model = std::unique_ptr<wccf_model, Deleter<wccf_model, wccf_model_free>>;
using Policy = std::unique_ptr<wccf_policy, Deleter<wccf_policy, wccf_policy_free>>;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
};

Config load_config(const Common& c) {
  wccf_config* raw = nullptr;
  if (c.config.empty())
    check(wccf_config_default(&raw), "default config");
  else
    check(wccf_config_load(c.config.c_str(), &raw), "config '" + c.config + "'");
  Config cfg(raw);
  if (c.seed) check(wccf_config_set_seed(cfg.get(), *c.seed), "seed");
  return cfg;
}

std::string out_path(const Common& c, const char* name) {
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw Failure("cannot create output directory '" + c.out + "': " + ec.message());
  return (fs::path(c.out) / name).string();
}

Model load_model(const std::string& path) {
  if (!fs::exists(path)) throw Failure("checkpoint '" + path + "' does not exist");
  wccf_model* raw = nullptr;
  check(wccf_model_load(path.c_str(), &raw), "checkpoint '" + path + "'");
  return Model(raw);
}

void gen_data(const Common& c) {
  const auto cfg = load_config(c);
  wccf_dataset* raw = nullptr;
  check(wccf_dataset_generate(cfg.get(), &raw), "gen-data");
  Dataset data(raw);
  const std::string path = out_path(c, "dataset.jsonl");
  check(wccf_dataset_save(data.get(), path.c_str()), "gen-data");
  const std::size_t episodes = wccf_dataset_episode_count(data.get());
  if (episodes == 0) std::fprintf(stderr, "wccf: warning: zero episodes requested, wrote an empty dataset\n");
  std::printf("wrote %zu records (%zu episodes) to %s\n", wccf_dataset_step_count(data.get()), episodes,
              path.c_str());
}

void train_model(const Common& c, const std::string& dataset_arg) {
  const auto cfg = load_config(c);
  const std::string dataset = dataset_arg.empty() ? (fs::path(c.out) / "dataset.jsonl").string() : dataset_arg;
  if (!fs::exists(dataset)) throw Failure("dataset '" + dataset + "' does not exist");
  wccf_dataset* raw = nullptr;
  check(wccf_dataset_load(cfg.get(), dataset.c_str(), &raw), "dataset '" + dataset + "'");
  Dataset data(raw);
  wccf_model* mraw = nullptr;
  check(wccf_model_train(cfg.get(), data.get(), &mraw), "train-model");
  Model model(mraw);
  const std::string ckpt = out_path(c, "model.ckpt.json");
  const std::string curve = out_path(c, "loss_curve.csv");
  check(wccf_model_save(model.get(), ckpt.c_str()), "train-model");
  check(wccf_model_save_loss_curve(model.get(), curve.c_str()), "train-model");
  std::printf("wrote %s and %s\n", ckpt.c_str(), curve.c_str());
}

std::string default_checkpoint(const Common& c, const std::string& arg) {
  return arg.empty() ? (fs::path(c.out) / "model.ckpt.json").string() : arg;
}

void train_policy(const Common& c, const std::string& checkpoint) {
  const auto cfg = load_config(c);
  const auto model = load_model(default_checkpoint(c, checkpoint));
  wccf_policy* raw = nullptr;
  check(wccf_policy_train(cfg.get(), model.get(), &raw), "train-policy");
  Policy policy(raw);
  const std::string table = out_path(c, "policy_table.csv");
  const std::string curve = out_path(c, "reward_curve.csv");
  check(wccf_policy_save(policy.get(), table.c_str()), "train-policy");
  check(wccf_policy_save_reward_curve(policy.get(), curve.c_str()), "train-policy");
  std::printf("wrote %s and %s\n", table.c_str(), curve.c_str());
}

void eval(const Common& c, const std::string& checkpoint, const std::string& policy_path) {
  const auto cfg = load_config(c);
  const auto model = load_model(default_checkpoint(c, checkpoint));
  int needs = 0;
  check(wccf_config_needs_policy(cfg.get(), &needs), "eval");
  Policy policy;
  if (needs) {
    if (policy_path.empty()) throw Failure("eval: RL_policy requested but no --policy file given");
    if (!fs::exists(policy_path)) throw Failure("policy '" + policy_path + "' does not exist");
    wccf_policy* raw = nullptr;
    check(wccf_policy_load(policy_path.c_str(), &raw), "policy '" + policy_path + "'");
    policy.reset(raw);
  }
  const std::string path = out_path(c, "metrics.csv");
  check(wccf_evaluate(cfg.get(), model.get(), policy.get(), path.c_str()), "eval");
  std::printf("wrote %s\n", path.c_str());
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Run configuration file (defaults built in)");
  sub->add_option("--seed", c.seed, "Override run.seed");
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wccf: context-aware beam prediction experiments"};
  app.require_subcommand(1);
  Common common;
  std::string dataset, checkpoint, policy;

  auto* gen = app.add_subcommand("gen-data", "Simulate episodes and write dataset.jsonl");
  add_common(gen, common);
  auto* tm = app.add_subcommand("train-model", "Train the beam predictor; writes model.ckpt.json and loss_curve.csv");
  add_common(tm, common);
  tm->add_option("--dataset", dataset, "Dataset JSONL (default OUT/dataset.jsonl)");
  auto* tp = app.add_subcommand("train-policy", "Train the acquisition policy; writes policy_table.csv and reward_curve.csv");
  add_common(tp, common);
  tp->add_option("--checkpoint", checkpoint, "Model checkpoint (default OUT/model.ckpt.json)");
  auto* ev = app.add_subcommand("eval", "Evaluate configurations; writes metrics.csv");
  add_common(ev, common);
  ev->add_option("--checkpoint", checkpoint, "Model checkpoint (default OUT/model.ckpt.json)");
  ev->add_option("--policy", policy, "Policy table CSV, required for RL_policy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) gen_data(common);
    else if (*tm) train_model(common, dataset);
    else if (*tp) train_policy(common, checkpoint);
    else if (*ev) eval(common, checkpoint, policy);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wccf: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
