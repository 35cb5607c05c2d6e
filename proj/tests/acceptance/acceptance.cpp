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

// End-to-end acceptance run. Drives the command-line tool on the default
// configuration, then re-checks the component properties in-process.
// Prints one PASS/FAIL line per criterion; exits nonzero if any fails.
//
// usage: wccf_acceptance <path to wccf> <work directory>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "agent.hpp"
#include "net.hpp"
#include "policy.hpp"
#include "store.hpp"
#include "support.hpp"
#include "train.hpp"

namespace fs = std::filesystem;
using namespace wccf;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v, int prec = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(prec);
  ss << v;
  return ss.str();
}

// Runs one CLI command and returns its wall time in seconds, or -1 on failure.
double run(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args;
  std::printf("  $ wccf %s\n", args.c_str());
  std::fflush(stdout);
  const auto t0 = Clock::now();
  const int rc = std::system(cmd.c_str());
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  if (rc != 0) {
    std::printf("  command failed with status %d\n", rc);
    return -1.0;
  }
  std::printf("    %.1f s\n", dt);
  return dt;
}

struct Pipeline {
  bool ok = true;
  double data_s = 0, model_s = 0, policy_s = 0, eval_s = 0;
};

Pipeline run_pipeline(const std::string& cli, const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string out = " --seed 0 --out \"" + dir.string() + "\"";
  Pipeline p;
  p.data_s = run(cli, "gen-data" + out);
  p.model_s = p.data_s < 0 ? -1 : run(cli, "train-model" + out);
  p.policy_s = p.model_s < 0 ? -1 : run(cli, "train-policy" + out);
  p.eval_s = p.policy_s < 0 ? -1 : run(cli, "eval" + out + " --policy \"" + (dir / "policy_table.csv").string() + "\"");
  p.ok = p.data_s >= 0 && p.model_s >= 0 && p.policy_s >= 0 && p.eval_s >= 0;
  return p;
}

struct Row {
  double accuracy = 0, reward = 0;
  std::string episodes, seeds;
};

std::map<std::string, Row> read_metrics(const fs::path& path) {
  std::map<std::string, Row> rows;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) continue;
    rows[f[0]] = Row{100.0 * std::stod(f[1]), std::stod(f[2]), f[7], f[8]};
  }
  return rows;
}

// ---------------------------------------------------------------- 4

bool check_reward() {
  const CostSpec c;
  const std::vector<std::size_t> topk{3, 8, 20};
  return reward(topk, 8, Action::None, c) == 1.0 - 0.01 && reward(topk, 9, Action::None, c) == -0.01 &&
         reward(topk, 9, Action::Image, c) == -0.01 - 0.1 && std::abs(reward(topk, 8, Action::None, c) - 0.99) < 1e-15 &&
         std::abs(reward(topk, 9, Action::Image, c) + 0.11) < 1e-15;
}

// ---------------------------------------------------------------- 5

double reference_loss(std::span<const Sample> batch, const ModelParams& p) {
  double total = 0.0;
  for (const auto& s : batch) total -= std::log(softmax(forward(materialise(s, p), p))[static_cast<Eigen::Index>(s.label)]);
  return total / static_cast<double>(batch.size());
}

// Largest per-group relative error and the number of groups checked.
std::pair<double, std::size_t> gradient_error() {
  ModelShape shape;
  shape.d_model = 8;
  shape.num_heads = 2;
  shape.num_blocks = 2;
  shape.ffn_hidden = 12;
  const EnvConfig env;
  Rng rng(5);
  ModelParams p = init_model(shape, env, 5);
  test::randomise(p, rng, 0.5);
  EnvConfig short_env = env;
  short_env.mobility.episode_steps = 12;
  const auto eps = generate_episodes(short_env, Stream::Dataset, 99, 1);
  p.radio_map = fit_radio_map(eps, shape, env);
  auto samples = build_training_samples(eps, shape, env, StoreConfig{}, 0.5, rng);
  samples.resize(6);

  const auto analytic = loss_and_grad(samples, p);
  std::vector<const double*> grads;
  for_each_tensor(analytic.grad, [&](std::string_view, const double* d, std::size_t, bool) { grads.push_back(d); });
  double worst = 0.0;
  std::size_t k = 0, groups = 0;
  ModelParams q = p;
  for_each_tensor(q, [&](std::string_view, double* d, std::size_t size, bool trainable) {
    const double* g = grads[k++];
    if (!trainable) return;
    double diff2 = 0, a2 = 0, n2 = 0;
    for (std::size_t i = 0; i < size; ++i) {
      const double orig = d[i];
      d[i] = orig + 1e-4;
      const double up = reference_loss(samples, q);
      d[i] = orig - 1e-4;
      const double down = reference_loss(samples, q);
      d[i] = orig;
      const double num = (up - down) / 2e-4;
      diff2 += (num - g[i]) * (num - g[i]);
      a2 += g[i] * g[i];
      n2 += num * num;
    }
    worst = std::max(worst, std::sqrt(diff2) / std::max({std::sqrt(a2), std::sqrt(n2), 1e-7}));
    ++groups;
  });
  return {worst, groups};
}

// ---------------------------------------------------------------- 6

std::size_t mask_mismatches() {
  const EnvConfig env;
  const ModelParams model = init_model(ModelShape{}, env, 17);
  AgentSetup setup;
  setup.model = &model;
  setup.env = env;
  EnvConfig short_env = env;
  short_env.mobility.episode_steps = 8;
  Rng rng(23);
  std::normal_distribution<double> garbage(0.0, 100.0);
  std::size_t bad = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto clean = rollout_episode(short_env, 1000 + static_cast<std::uint64_t>(rep));
    const Action a = action_from_index(static_cast<std::size_t>(rep % 3));
    const ActionChooser choose = [a](const AgentState&) { return a; };
    auto noisy = clean;
    for (auto& s : noisy.steps) {
      if (!acquires_image(a))
        for (auto& v : s.image) v = garbage(rng);
      if (!acquires_lidar(a))
        for (auto& v : s.lidar) v = garbage(rng);
    }
    const auto x = run_episode(clean, setup, choose), y = run_episode(noisy, setup, choose);
    for (std::size_t t = 0; t < x.size(); ++t)
      if (x[t].topk != y[t].topk || x[t].top1_prob != y[t].top1_prob) ++bad;
  }
  return bad;
}

// ---------------------------------------------------------------- 7

double q_oracle_error() {
  const double r[3][4] = {{0.1, -0.2, 0.5, 0.0}, {1.0, 0.3, -1.0, 0.2}, {0.0, 0.0, 0.7, -0.5}};
  const std::size_t nxt[3][4] = {{1, 2, 0, 1}, {2, 0, 1, 1}, {0, 1, 2, 0}};
  const double gamma = 0.9;
  double vi[3][4] = {};
  for (int it = 0; it < 2000; ++it) {
    double next[3][4];
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 4; ++a) next[s][a] = r[s][a] + gamma * *std::max_element(vi[nxt[s][a]], vi[nxt[s][a]] + 4);
    std::copy(&next[0][0], &next[0][0] + 12, &vi[0][0]);
  }
  PolicyTable q;
  for (int sweep = 0; sweep < 3000; ++sweep)
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t a = 0; a < 4; ++a)
        q_update(q, AgentState::from_index(s), action_from_index(a), r[s][a], AgentState::from_index(nxt[s][a]), 0.5,
                 gamma);
  double worst = 0.0;
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t a = 0; a < 4; ++a) worst = std::max(worst, std::abs(q.at(s, action_from_index(a)) - vi[s][a]));
  return worst;
}

// ---------------------------------------------------------------- 8

ContextToken token(double serial, TokenTag tag, double ts, TtlClass ttl) {
  ContextToken t;
  t.embedding = Vec::Zero(2);
  t.embedding[0] = serial;
  t.tag = tag;
  t.timestamp = ts;
  t.ttl = ttl;
  return t;
}

double score(const ContextToken& t, double now, const StoreConfig& c) {
  const double w = c.weights[static_cast<std::size_t>(t.tag)];
  return std::isinf(c.ttl(t.ttl)) ? w : w * std::exp(-(now - t.timestamp) / c.ttl(t.ttl));
}

// Keeps the subset of size `budget` that no excluded token outranks.
std::vector<double> exhaustive_keep(const std::vector<ContextToken>& v, std::size_t budget, double now,
                                    const StoreConfig& c) {
  const std::size_t n = v.size();
  auto outranks = [&](std::size_t i, std::size_t j) {
    const double si = score(v[i], now, c), sj = score(v[j], now, c);
    if (si != sj) return si > sj;
    if (v[i].timestamp != v[j].timestamp) return v[i].timestamp > v[j].timestamp;
    return i < j;
  };
  std::vector<double> keep;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != std::min(budget, n)) continue;
    bool ok = true;
    for (std::size_t in = 0; in < n && ok; ++in)
      for (std::size_t out = 0; out < n && ok; ++out)
        if ((mask >> in & 1u) && !(mask >> out & 1u) && outranks(out, in)) ok = false;
    if (!ok) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) keep.push_back(v[i].embedding[0]);
    break;
  }
  return keep;
}

std::vector<double> serials(std::span<const ContextToken> v) {
  std::vector<double> out;
  for (const auto& t : v) out.push_back(t.embedding[0]);
  return out;
}

std::pair<std::size_t, std::size_t> store_violations() {
  Rng rng(31);
  std::uniform_int_distribution<int> op(0, 9), budget_d(0, 6), tag_d(0, kNumTokenTags - 1), ttl_d(0, 2), ts_d(0, 4);
  std::uniform_real_distribution<double> dt(0.0, 0.3), lag(0.0, 0.5), w(0.0, 2.0);
  auto tag = [&] { return static_cast<TokenTag>(tag_d(rng)); };
  auto ttl = [&] { return static_cast<TtlClass>(ttl_d(rng)); };

  std::size_t invariant = 0;
  for (int seq = 0; seq < 10000; ++seq) {
    StoreConfig cfg;
    cfg.budget = static_cast<std::size_t>(budget_d(rng));
    ContextStore s(cfg);
    double now = 0.0, serial = 0.0;
    for (int k = 0; k < 20; ++k) {
      const int o = op(rng);
      if (o < 6) {
        s.insert(token(serial++, tag(), std::max(0.0, now - lag(rng)), ttl()), now);
        if (s.size() > cfg.budget) ++invariant;
      } else if (o < 9) {
        now += dt(rng);
        s.sweep(now);
        for (const auto& t : s.tokens())
          if (now - t.timestamp > cfg.ttl(t.ttl) + kAgeSlack) ++invariant;
      } else {
        const auto before = s.size();
        const auto b = static_cast<std::size_t>(budget_d(rng));
        s.prioritize(b, now);
        if (s.size() != std::min(b, before)) ++invariant;
      }
      const auto ids = serials(s.tokens());
      if (!std::is_sorted(ids.begin(), ids.end())) ++invariant;
    }
  }

  std::size_t oracle = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    StoreConfig cfg;
    cfg.budget = 64;
    for (auto& x : cfg.weights) x = std::round(w(rng) * 2) / 2;
    ContextStore s(cfg);
    const int n = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int i = 0; i < n; ++i) s.insert(token(i, tag(), 0.25 * ts_d(rng), ttl()), 1.0);
    const std::vector<ContextToken> before(s.tokens().begin(), s.tokens().end());
    const auto b = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n + 1)(rng));
    s.prioritize(b, 1.0);
    if (serials(s.tokens()) != exhaustive_keep(before, b, 1.0, cfg)) ++oracle;
  }
  return {invariant, oracle};
}

// ---------------------------------------------------------------- 9

std::vector<std::string> differing_outputs(const fs::path& a, const fs::path& b) {
  std::vector<std::string> diff;
  for (const char* name : {"dataset.jsonl", "model.ckpt.json", "loss_curve.csv", "policy_table.csv", "reward_curve.csv",
                           "metrics.csv"}) {
    if (!fs::exists(a / name) || !fs::exists(b / name) || test::read_file(a / name) != test::read_file(b / name))
      diff.emplace_back(name);
  }
  return diff;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <path to wccf> <work directory>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path work = argv[2];

  std::printf("pipeline run A (default configuration, seed 0)\n");
  const Pipeline a = run_pipeline(cli, work / "run_a");
  std::printf("pipeline run B (same seed)\n");
  const Pipeline b = run_pipeline(cli, work / "run_b");

  const auto m = read_metrics(work / "run_a" / "metrics.csv");
  const char* names[] = {"Only_GPS", "Missing_image", "Missing_LiDAR", "Full_observation", "RL_policy"};
  bool have_all = a.ok;
  for (const char* n : names) have_all = have_all && m.count(n);
  if (have_all) {
    for (const char* n : names)
      std::printf("  %-17s top3 %6.2f%%  reward %.4f  (episodes %s, seeds %s)\n", n, m.at(n).accuracy,
                  m.at(n).reward, m.at(n).episodes.c_str(), m.at(n).seeds.c_str());
  }

  // 1: ordering, tier gaps and bands, on 5 seeds x 100 episodes.
  if (have_all) {
    const double gps = m.at("Only_GPS").accuracy, mi = m.at("Missing_image").accuracy,
                 ml = m.at("Missing_LiDAR").accuracy, full = m.at("Full_observation").accuracy;
    const double single = (mi + ml) / 2.0;
    const bool protocol = m.at("Only_GPS").episodes == "100" && m.at("Only_GPS").seeds == "0;1;2;3;4";
    const bool order = gps < mi && gps < ml && mi < full && ml < full;
    const bool gaps = single - gps >= 5.0 && full - single >= 5.0;
    const bool bands = gps >= 55 && gps <= 70 && mi >= 70 && mi <= 82 && ml >= 70 && ml <= 82 && full >= 80 && full <= 92;
    const double runtime = a.data_s + a.model_s + a.eval_s;
    report(1, protocol && order && gaps && bands && runtime <= 300.0,
           "order " + std::string(order ? "ok" : "violated") + ", gaps " + fmt(single - gps) + " / " +
               fmt(full - single) + " pp (min 5), bands " + (bands ? "ok" : "violated") + ", runtime " +
               fmt(runtime, 0) + " s (max 300)");
  } else {
    report(1, false, "pipeline did not produce metrics");
  }

  // 2: diminishing returns.
  if (have_all) {
    const double gap = m.at("Full_observation").accuracy -
                       std::max(m.at("Missing_image").accuracy, m.at("Missing_LiDAR").accuracy);
    report(2, gap <= 10.0, "Full - best single-context gap " + fmt(gap) + " pp (max 10)");
  } else {
    report(2, false, "pipeline did not produce metrics");
  }

  // 3: RL policy accuracy and reward.
  if (have_all) {
    const auto& rl = m.at("RL_policy");
    const double full = m.at("Full_observation").accuracy;
    double best_fixed = -1e9;
    for (int i = 0; i < 4; ++i) best_fixed = std::max(best_fixed, m.at(names[i]).reward);
    const double runtime = a.policy_s + a.eval_s;
    const bool ok = rl.accuracy >= full - 5.0 && rl.reward >= best_fixed - 0.02 && runtime <= 600.0;
    report(3, ok, "accuracy " + fmt(rl.accuracy) + "% vs Full - 5 = " + fmt(full - 5.0) + "%, reward " +
                      fmt(rl.reward, 4) + " vs best fixed - 0.02 = " + fmt(best_fixed - 0.02, 4) + ", runtime " +
                      fmt(runtime, 0) + " s (max 600)");
  } else {
    report(3, false, "pipeline did not produce metrics");
  }

  report(4, check_reward(), "reward(hit, GPS) = 0.99, reward(miss, GPS) = -0.01, reward(miss, GPS+image) = -0.11");

  {
    const auto t0 = Clock::now();
    const auto [err, groups] = gradient_error();
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream d;
    d << "max relative error " << err << " over " << groups << " groups (max 1e-4), " << fmt(dt, 1) << " s (max 30)";
    report(5, err < 1e-4 && groups > 0 && dt <= 30.0, d.str());
  }

  {
    const auto bad = mask_mismatches();
    report(6, bad == 0, std::to_string(bad) + " differing predictions over 100 randomised inputs");
  }

  {
    const double err = q_oracle_error();
    std::ostringstream d;
    d << "max |Q - Q*| = " << err << " (max 1e-6)";
    report(7, err < 1e-6, d.str());
  }

  {
    const auto [inv, oracle] = store_violations();
    report(8, inv == 0 && oracle == 0,
           std::to_string(inv) + " invariant violations in 10000 sequences, " + std::to_string(oracle) +
               " oracle mismatches in 2000 stores");
  }

  if (a.ok && b.ok) {
    const auto diff = differing_outputs(work / "run_a", work / "run_b");
    std::string d = diff.empty() ? "all outputs byte-identical across reruns" : "differs:";
    for (const auto& f : diff) d += " " + f;
    report(9, diff.empty(), d);
  } else {
    report(9, false, "a pipeline run failed");
  }

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
