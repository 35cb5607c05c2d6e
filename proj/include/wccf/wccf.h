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

/* C interface to the wccf library. Every call returns a wccf_status;
 * details of the most recent failure on the calling thread are available
 * from wccf_last_error(). Handles are opaque and owned by the caller. */

#ifndef WCCF_WCCF_H
#define WCCF_WCCF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef WCCF_BUILDING_LIBRARY
#    define WCCF_API __declspec(dllexport)
#  else
#    define WCCF_API __declspec(dllimport)
#  endif
#else
#  define WCCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wccf_status {
  WCCF_OK = 0,
  WCCF_ERR_SCHEMA = 1,    /* malformed file or shape mismatch */
  WCCF_ERR_CONTRACT = 2,  /* precondition violated */
  WCCF_ERR_GEOMETRY = 3,
  WCCF_ERR_IO = 4,
  WCCF_ERR_CONFIG = 5,
  WCCF_ERR_NUMERIC = 6,   /* NaN or Inf during training */
  WCCF_ERR_UNDEFINED = 7, /* comparison without a defined value */
  WCCF_ERR_ARGUMENT = 8,  /* null handle or pointer */
  WCCF_ERR_INTERNAL = 9
} wccf_status;

typedef struct wccf_config wccf_config;
typedef struct wccf_dataset wccf_dataset;
typedef struct wccf_model wccf_model;
typedef struct wccf_policy wccf_policy;

WCCF_API const char* wccf_version(void);
WCCF_API const char* wccf_last_error(void);
WCCF_API const char* wccf_status_name(wccf_status status);

/* Configuration */
WCCF_API wccf_status wccf_config_default(wccf_config** out);
WCCF_API wccf_status wccf_config_load(const char* path, wccf_config** out);
WCCF_API wccf_status wccf_config_save(const wccf_config* cfg, const char* path);
WCCF_API wccf_status wccf_config_set_seed(wccf_config* cfg, uint64_t seed);
WCCF_API wccf_status wccf_config_get_seed(const wccf_config* cfg, uint64_t* seed);
/* Number of eval.configs entries that require a trained policy (0 or 1). */
WCCF_API wccf_status wccf_config_needs_policy(const wccf_config* cfg, int* needs);
WCCF_API void wccf_config_free(wccf_config* cfg);

/* Datasets (JSONL, one step per line) */
WCCF_API wccf_status wccf_dataset_generate(const wccf_config* cfg, wccf_dataset** out);
WCCF_API wccf_status wccf_dataset_load(const wccf_config* cfg, const char* path, wccf_dataset** out);
WCCF_API wccf_status wccf_dataset_save(const wccf_dataset* data, const char* path);
WCCF_API size_t wccf_dataset_episode_count(const wccf_dataset* data);
WCCF_API size_t wccf_dataset_step_count(const wccf_dataset* data);
WCCF_API void wccf_dataset_free(wccf_dataset* data);

/* Beam prediction model */
WCCF_API wccf_status wccf_model_train(const wccf_config* cfg, const wccf_dataset* data, wccf_model** out);
WCCF_API wccf_status wccf_model_load(const char* path, wccf_model** out);
WCCF_API wccf_status wccf_model_save(const wccf_model* model, const char* path);
/* CSV "epoch,loss"; only models produced by wccf_model_train carry a curve. */
WCCF_API wccf_status wccf_model_save_loss_curve(const wccf_model* model, const char* path);
WCCF_API size_t wccf_model_num_beams(const wccf_model* model);
/* gps: 2 values; image: 4 values or NULL; lidar: 6 values or NULL.
 * Writes k beam indices, most probable first. No history is used. */
WCCF_API wccf_status wccf_model_predict_topk(const wccf_model* model, const double* gps, const double* image,
                                             const double* lidar, size_t k, size_t* out_indices);
WCCF_API void wccf_model_free(wccf_model* model);

/* Acquisition policy */
WCCF_API wccf_status wccf_policy_train(const wccf_config* cfg, const wccf_model* model, wccf_policy** out);
WCCF_API wccf_status wccf_policy_load(const char* path, wccf_policy** out);
WCCF_API wccf_status wccf_policy_save(const wccf_policy* policy, const char* path);
/* CSV "episode,mean_reward"; only policies produced by wccf_policy_train carry a curve. */
WCCF_API wccf_status wccf_policy_save_reward_curve(const wccf_policy* policy, const char* path);
WCCF_API void wccf_policy_free(wccf_policy* policy);

/* Runs every configuration listed in eval.configs and writes one CSV row
 * each. policy may be NULL unless RL_policy is requested. */
WCCF_API wccf_status wccf_evaluate(const wccf_config* cfg, const wccf_model* model, const wccf_policy* policy,
                                   const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* WCCF_WCCF_H */
