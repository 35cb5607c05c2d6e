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

#include "wccf/wccf.h"

#include <fstream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "checkpoint.hpp"
#include "config.hpp"
#include "dataset.hpp"
#include "metrics.hpp"
#include "policy_training.hpp"

struct wccf_config {
  wccf::RunConfig cfg;
};

struct wccf_dataset {
  std::vector<wccf::EpisodeRecord> episodes;
};

struct wccf_model {
  wccf::ModelParams params;
  std::vector<double> loss_curve;
};

struct wccf_policy {
  wccf::PolicyTable table;
  std::vector<double> reward_curve;
};

namespace {

thread_local std::string g_last_error;

wccf_status to_status(wccf::ErrorCode c) {
  switch (c) {
    case wccf::ErrorCode::Schema: return WCCF_ERR_SCHEMA;
    case wccf::ErrorCode::Contract: return WCCF_ERR_CONTRACT;
    case wccf::ErrorCode::Geometry: return WCCF_ERR_GEOMETRY;
    case wccf::ErrorCode::Io: return WCCF_ERR_IO;
    case wccf::ErrorCode::Config: return WCCF_ERR_CONFIG;
    case wccf::ErrorCode::Numeric: return WCCF_ERR_NUMERIC;
    case wccf::ErrorCode::Undefined: return WCCF_ERR_UNDEFINED;
  }
  return WCCF_ERR_INTERNAL;
}

template <class F>
wccf_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return WCCF_OK;
  } catch (const wccf::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return WCCF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WCCF_ERR_INTERNAL;
  }
}

wccf_status bad_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return WCCF_ERR_ARGUMENT;
}

std::ofstream open_out(const char* path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) wccf::fail(wccf::ErrorCode::Io, std::string("cannot open '") + path + "' for writing");
  return out;
}

wccf::AgentSetup make_setup(const wccf::RunConfig& cfg, const wccf::ModelParams& model) {
  if (model.shape.num_beams != cfg.env.num_beams)
    wccf::fail(wccf::ErrorCode::Schema, "model predicts " + std::to_string(model.shape.num_beams) +
                                            " beams but the environment has " + std::to_string(cfg.env.num_beams));
  if (cfg.store.budget + wccf::kFixedSlots > model.shape.max_seq)
    wccf::fail(wccf::ErrorCode::Config, "store.budget does not fit the model's sequence length");
  wccf::AgentSetup s;
  s.model = &model;
  s.env = cfg.env;
  s.store = cfg.store;
  s.costs = cfg.costs;
  s.thresholds = cfg.thresholds;
  return s;
}

}  // namespace

extern "C" {

const char* wccf_version(void) { return "0.1.0"; }

const char* wccf_last_error(void) { return g_last_error.c_str(); }

const char* wccf_status_name(wccf_status status) {
  switch (status) {
    case WCCF_OK: return "ok";
    case WCCF_ERR_SCHEMA: return "schema error";
    case WCCF_ERR_CONTRACT: return "contract violation";
    case WCCF_ERR_GEOMETRY: return "geometry error";
    case WCCF_ERR_IO: return "I/O error";
    case WCCF_ERR_CONFIG: return "configuration error";
    case WCCF_ERR_NUMERIC: return "numeric error";
    case WCCF_ERR_UNDEFINED: return "undefined comparison";
    case WCCF_ERR_ARGUMENT: return "invalid argument";
    case WCCF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

wccf_status wccf_config_default(wccf_config** out) {
  if (!out) return bad_argument("out");
  return guarded([&] { *out = new wccf_config{}; });
}

wccf_status wccf_config_load(const char* path, wccf_config** out) {
  if (!path) return bad_argument("path");
  if (!out) return bad_argument("out");
  return guarded([&] { *out = new wccf_config{wccf::load_config(path)}; });
}

wccf_status wccf_config_save(const wccf_config* cfg, const char* path) {
  if (!cfg) return bad_argument("cfg");
  if (!path) return bad_argument("path");
  return guarded([&] {
    auto out = open_out(path);
    out << wccf::serialize_config(cfg->cfg);
    if (!out) wccf::fail(wccf::ErrorCode::Io, std::string("failed to write '") + path + "'");
  });
}

wccf_status wccf_config_set_seed(wccf_config* cfg, uint64_t seed) {
  if (!cfg) return bad_argument("cfg");
  cfg->cfg.seed = seed;
  g_last_error.clear();
  return WCCF_OK;
}

wccf_status wccf_config_get_seed(const wccf_config* cfg, uint64_t* seed) {
  if (!cfg) return bad_argument("cfg");
  if (!seed) return bad_argument("seed");
  *seed = cfg->cfg.seed;
  g_last_error.clear();
  return WCCF_OK;
}

wccf_status wccf_config_needs_policy(const wccf_config* cfg, int* needs) {
  if (!cfg) return bad_argument("cfg");
  if (!needs) return bad_argument("needs");
  *needs = 0;
  for (const auto& name : cfg->cfg.eval_configs)
    if (name == wccf::kRlPolicy) *needs = 1;
  g_last_error.clear();
  return WCCF_OK;
}

void wccf_config_free(wccf_config* cfg) { delete cfg; }

wccf_status wccf_dataset_generate(const wccf_config* cfg, wccf_dataset** out) {
  if (!cfg) return bad_argument("cfg");
  if (!out) return bad_argument("out");
  return guarded([&] {
    const auto& c = cfg->cfg;
    *out = new wccf_dataset{wccf::generate_episodes(c.env, wccf::Stream::Dataset, c.seed, c.data_episodes)};
  });
}

wccf_status wccf_dataset_load(const wccf_config* cfg, const char* path, wccf_dataset** out) {
  if (!cfg) return bad_argument("cfg");
  if (!path) return bad_argument("path");
  if (!out) return bad_argument("out");
  return guarded([&] { *out = new wccf_dataset{wccf::import_dataset(path, cfg->cfg.env.num_beams)}; });
}

wccf_status wccf_dataset_save(const wccf_dataset* data, const char* path) {
  if (!data) return bad_argument("data");
  if (!path) return bad_argument("path");
  return guarded([&] { wccf::export_dataset(data->episodes, path); });
}

size_t wccf_dataset_episode_count(const wccf_dataset* data) { return data ? data->episodes.size() : 0; }

size_t wccf_dataset_step_count(const wccf_dataset* data) { return data ? wccf::total_steps(data->episodes) : 0; }

void wccf_dataset_free(wccf_dataset* data) { delete data; }

wccf_status wccf_model_train(const wccf_config* cfg, const wccf_dataset* data, wccf_model** out) {
  if (!cfg) return bad_argument("cfg");
  if (!data) return bad_argument("data");
  if (!out) return bad_argument("out");
  return guarded([&] {
    const auto& c = cfg->cfg;
    auto result = wccf::train_model(data->episodes, c.train_config(), c.model_shape(), c.env, c.store);
    *out = new wccf_model{std::move(result.params), std::move(result.loss_curve)};
  });
}

wccf_status wccf_model_load(const char* path, wccf_model** out) {
  if (!path) return bad_argument("path");
  if (!out) return bad_argument("out");
  return guarded([&] { *out = new wccf_model{wccf::load_checkpoint(path), {}}; });
}

wccf_status wccf_model_save(const wccf_model* model, const char* path) {
  if (!model) return bad_argument("model");
  if (!path) return bad_argument("path");
  return guarded([&] { wccf::save_checkpoint(model->params, path); });
}

wccf_status wccf_model_save_loss_curve(const wccf_model* model, const char* path) {
  if (!model) return bad_argument("model");
  if (!path) return bad_argument("path");
  return guarded([&] {
    if (model->loss_curve.empty())
      wccf::fail(wccf::ErrorCode::Contract, "model has no loss curve; it was loaded rather than trained");
    auto out = open_out(path);
    wccf::write_loss_curve_csv(out, model->loss_curve);
  });
}

size_t wccf_model_num_beams(const wccf_model* model) { return model ? model->params.shape.num_beams : 0; }

wccf_status wccf_model_predict_topk(const wccf_model* model, const double* gps, const double* image,
                                    const double* lidar, size_t k, size_t* out_indices) {
  if (!model) return bad_argument("model");
  if (!gps) return bad_argument("gps");
  if (!out_indices) return bad_argument("out_indices");
  return guarded([&] {
    auto obs = [](wccf::Modality m, const double* f) {
      wccf::Observation o;
      o.modality = m;
      o.features.assign(f, f + wccf::feature_dim(m));
      o.validate();
      return o;
    };
    std::optional<wccf::Observation> img, lid;
    if (image) img = obs(wccf::Modality::Image, image);
    if (lidar) lid = obs(wccf::Modality::Lidar, lidar);
    const auto top = wccf::predict_topk(obs(wccf::Modality::Gps, gps), img, lid, {}, model->params, k);
    std::copy(top.begin(), top.end(), out_indices);
  });
}

void wccf_model_free(wccf_model* model) { delete model; }

wccf_status wccf_policy_train(const wccf_config* cfg, const wccf_model* model, wccf_policy** out) {
  if (!cfg) return bad_argument("cfg");
  if (!model) return bad_argument("model");
  if (!out) return bad_argument("out");
  return guarded([&] {
    const auto& c = cfg->cfg;
    const auto setup = make_setup(c, model->params);
    const auto episodes = wccf::generate_episodes(c.env, wccf::Stream::PolicyEpisodes, c.seed, c.rl.episodes);
    auto result = wccf::train_policy_on(episodes, setup, c.rl_config());
    *out = new wccf_policy{std::move(result.table), std::move(result.reward_curve)};
  });
}

wccf_status wccf_policy_load(const char* path, wccf_policy** out) {
  if (!path) return bad_argument("path");
  if (!out) return bad_argument("out");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) wccf::fail(wccf::ErrorCode::Io, std::string("cannot open policy '") + path + "'");
    *out = new wccf_policy{wccf::read_policy_csv(in), {}};
  });
}

wccf_status wccf_policy_save(const wccf_policy* policy, const char* path) {
  if (!policy) return bad_argument("policy");
  if (!path) return bad_argument("path");
  return guarded([&] {
    auto out = open_out(path);
    wccf::write_policy_csv(out, policy->table);
  });
}

wccf_status wccf_policy_save_reward_curve(const wccf_policy* policy, const char* path) {
  if (!policy) return bad_argument("policy");
  if (!path) return bad_argument("path");
  return guarded([&] {
    auto out = open_out(path);
    wccf::write_reward_curve_csv(out, policy->reward_curve);
  });
}

void wccf_policy_free(wccf_policy* policy) { delete policy; }

wccf_status wccf_evaluate(const wccf_config* cfg, const wccf_model* model, const wccf_policy* policy,
                          const char* csv_path) {
  if (!cfg) return bad_argument("cfg");
  if (!model) return bad_argument("model");
  if (!csv_path) return bad_argument("csv_path");
  return guarded([&] {
    const auto& c = cfg->cfg;
    const auto setup = make_setup(c, model->params);
    std::vector<wccf::MetricsReport> reports;
    for (const auto& name : c.eval_configs) {
      wccf::EvalTarget target;
      if (const auto a = wccf::baseline_action(name)) {
        target = wccf::EvalTarget::constant(name, *a);
      } else if (name == wccf::kRlPolicy) {
        if (!policy) wccf::fail(wccf::ErrorCode::Contract, "RL_policy requested but no policy was given");
        target = wccf::EvalTarget::greedy(name, policy->table);
      } else {
        wccf::fail(wccf::ErrorCode::Config, "unknown configuration '" + name + "'");
      }
      reports.push_back(wccf::evaluate(setup, target, c.eval_episodes, c.eval_seeds));
    }
    auto out = open_out(csv_path);
    wccf::write_metrics_csv(out, reports);
  });
}

}  // extern "C"
