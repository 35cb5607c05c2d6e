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
#include <numeric>

#include "embed.hpp"
#include "net.hpp"
#include "support.hpp"

using namespace wccf;

namespace {

ModelShape tiny_shape(std::size_t heads = 1, std::size_t blocks = 1) {
  ModelShape s;
  s.d_model = 8;
  s.num_heads = heads;
  s.num_blocks = blocks;
  s.ffn_hidden = 12;
  s.max_seq = 8;
  s.num_beams = 6;
  s.radio_map_buckets = 3;
  return s;
}

EnvConfig tiny_env() {
  EnvConfig e;
  e.num_beams = 6;
  return e;
}

SlotSource random_slot(Rng& rng) {
  std::uniform_int_distribution<int> kind(0, 5);
  SlotSource s;
  switch (kind(rng)) {
    case 0: s.kind = SlotSource::Kind::MissingImage; break;
    case 1: s.kind = SlotSource::Kind::MissingLidar; break;
    case 2:
      s.kind = SlotSource::Kind::RadioMap;
      s.bucket = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
      break;
    default: {
      const auto m = static_cast<Modality>(std::uniform_int_distribution<int>(0, 2)(rng));
      s = SlotSource::encoded(test::random_observation(m, rng, 20.0));
    }
  }
  return s;
}

std::vector<Sample> random_batch(Rng& rng, std::size_t n, std::size_t beams) {
  std::vector<Sample> out;
  std::uniform_int_distribution<std::size_t> len(4, 8), label(0, beams - 1);
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.slots.push_back(SlotSource{});
    const auto L = len(rng);
    while (s.slots.size() < L) s.slots.push_back(random_slot(rng));
    s.label = label(rng);
    out.push_back(std::move(s));
  }
  return out;
}

// Mean cross-entropy through the single-sequence inference path.
double reference_loss(std::span<const Sample> batch, const ModelParams& p) {
  double total = 0.0;
  for (const auto& s : batch) {
    const Vec prob = softmax(forward(materialise(s, p), p));
    total -= std::log(prob[static_cast<Eigen::Index>(s.label)]);
  }
  return total / static_cast<double>(batch.size());
}

void check_gradients(const ModelShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  ModelParams p = init_model(shape, tiny_env(), seed);
  test::randomise(p, rng, 0.5);
  std::normal_distribution<double> n(0.0, 0.5);
  for (Eigen::Index i = 0; i < p.radio_map.size(); ++i) p.radio_map.data()[i] = n(rng);
  const auto batch = random_batch(rng, 5, shape.num_beams);

  const auto analytic = loss_and_grad(batch, p);
  CHECK(analytic.loss == doctest::Approx(reference_loss(batch, p)).epsilon(1e-12));

  std::vector<const double*> grads;
  for_each_tensor(analytic.grad, [&](std::string_view, const double* d, std::size_t, bool) { grads.push_back(d); });

  const double eps = 1e-4;
  std::size_t k = 0;
  std::size_t groups = 0;
  ModelParams q = p;
  for_each_tensor(q, [&](std::string_view name, double* d, std::size_t size, bool trainable) {
    const double* g = grads[k++];
    if (!trainable) return;
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      const double orig = d[i];
      d[i] = orig + eps;
      const double up = reference_loss(batch, q);
      d[i] = orig - eps;
      const double down = reference_loss(batch, q);
      d[i] = orig;
      const double num = (up - down) / (2.0 * eps);
      diff2 += (num - g[i]) * (num - g[i]);
      a2 += g[i] * g[i];
      n2 += num * num;
    }
    // A key bias shifts every score of a query equally, so its true gradient
    // is zero and only rounding noise remains on both sides.
    const double rel = std::sqrt(diff2) / std::max({std::sqrt(a2), std::sqrt(n2), 1e-7});
    INFO("tensor " << name << " relative error " << rel << " |analytic| " << std::sqrt(a2) << " |numeric| "
                   << std::sqrt(n2));
    CHECK(rel < 1e-4);
    ++groups;
  });
  CHECK(groups > 20);
}

}  // namespace

TEST_CASE("gradients match central finite differences, one head one block") { check_gradients(tiny_shape(), 11); }

TEST_CASE("gradients match central finite differences, two heads two blocks") {
  check_gradients(tiny_shape(2, 2), 12);
}

TEST_CASE("fixed tensors receive no gradient") {
  Rng rng(3);
  const auto shape = tiny_shape();
  ModelParams p = init_model(shape, tiny_env(), 3);
  const auto g = loss_and_grad(random_batch(rng, 4, shape.num_beams), p).grad;
  for_each_tensor(g, [&](std::string_view name, const double* d, std::size_t n, bool trainable) {
    if (trainable) return;
    INFO(name);
    CHECK(std::all_of(d, d + n, [](double v) { return v == 0.0; }));
  });
}

TEST_CASE("padded batch loss equals the mean of per-sequence losses") {
  Rng rng(5);
  ModelShape shape;
  ModelParams p = init_model(shape, EnvConfig{}, 5);
  test::randomise(p, rng, 0.3);
  const auto batch = random_batch(rng, 16, shape.num_beams);
  CHECK(batch_loss(batch, p) == doctest::Approx(reference_loss(batch, p)).epsilon(1e-12));
}

TEST_CASE("all-zero parameters give uniform logits and loss ln(num_beams)") {
  const ModelShape shape;
  const ModelParams p = zero_model(shape, EnvConfig{});
  Rng rng(1);
  const auto batch = random_batch(rng, 3, shape.num_beams);
  const Vec logits = forward(materialise(batch[0], p), p);
  CHECK((logits.array() == logits[0]).all());
  CHECK(loss_and_grad(batch, p).loss == doctest::Approx(std::log(32.0)).epsilon(1e-12));
  CHECK(std::log(32.0) == doctest::Approx(3.4657).epsilon(1e-4));
}

TEST_CASE("saturated logits give near-zero loss") {
  const ModelShape shape;
  ModelParams p = init_model(shape, EnvConfig{}, 2);
  p.head.setZero();
  p.head_bias.setZero();
  p.head_bias[7] = 60.0;
  Rng rng(2);
  auto batch = random_batch(rng, 1, shape.num_beams);
  batch[0].label = 7;
  CHECK(loss_and_grad(batch, p).loss < 1e-20);
}

TEST_CASE("forward is deterministic") {
  Rng rng(4);
  const ModelShape shape;
  const ModelParams p = init_model(shape, EnvConfig{}, 4);
  const auto seq = materialise(random_batch(rng, 1, shape.num_beams)[0], p);
  const Vec a = forward(seq, p);
  const Vec b = forward(seq, p);
  CHECK((a.array() == b.array()).all());
  CHECK(a.allFinite());
}

TEST_CASE("forward rejects bad shapes") {
  const ModelShape shape;
  const ModelParams p = init_model(shape, EnvConfig{}, 4);
  std::vector<ContextToken> seq(3, cls_token(p.encoders));
  CHECK_THROWS_AS(forward(seq, p), Error);
  seq.resize(9, cls_token(p.encoders));
  CHECK_THROWS_AS(forward(seq, p), Error);
  seq.resize(5);
  seq[4].embedding = Vec::Zero(31);
  try {
    forward(seq, p);
    FAIL("expected a schema error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Schema);
  }
}

TEST_CASE("swapping history tokens with their positional vectors") {
  const ModelShape shape;
  ModelParams p = init_model(shape, EnvConfig{}, 8);
  Rng rng(8);
  auto seq = materialise(random_batch(rng, 1, shape.num_beams)[0], p);
  seq.resize(4);
  for (int i = 0; i < 2; ++i) seq.push_back(encode(test::random_observation(Modality::Gps, rng, 30.0), p.encoders));
  auto swapped = seq;
  std::swap(swapped[4], swapped[5]);

  // Distinct positional vectors: the order matters.
  const Vec a = forward(seq, p);
  CHECK((a - forward(swapped, p)).cwiseAbs().maxCoeff() > 1e-6);

  // Equal positional vectors at the two slots: attention is permutation
  // invariant over keys, so only summation order differs.
  p.positional.row(5) = p.positional.row(4);
  const Vec b = forward(seq, p);
  CHECK((b - forward(swapped, p)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("softmax is a distribution") {
  Rng rng(9);
  std::normal_distribution<double> n(0.0, 10.0);
  for (int rep = 0; rep < 200; ++rep) {
    Vec logits(32);
    for (auto& v : logits) v = n(rng);
    const Vec p = softmax(logits);
    CHECK(std::abs(p.sum() - 1.0) < 1e-6);
    CHECK((p.array() >= 0.0).all());
    CHECK((p.array() <= 1.0).all());
  }
}

TEST_CASE("softmax_topk") {
  Vec logits = Vec::Zero(32);
  logits[31] = 5.0;
  CHECK(softmax_topk(logits, 1) == std::vector<std::size_t>{31});
  CHECK(softmax_topk(Vec::Zero(32), 3) == std::vector<std::size_t>{0, 1, 2});
  CHECK_THROWS_AS(softmax_topk(logits, 33), Error);
  CHECK_THROWS_AS(softmax_topk(logits, 0), Error);

  Rng rng(10);
  std::uniform_int_distribution<int> coarse(-3, 3);
  for (int rep = 0; rep < 500; ++rep) {
    Vec l(32);
    for (auto& v : l) v = coarse(rng);  // many exact ties
    const std::size_t k = 1 + static_cast<std::size_t>(rep % 32);
    std::vector<std::size_t> oracle(32);
    std::iota(oracle.begin(), oracle.end(), std::size_t{0});
    std::stable_sort(oracle.begin(), oracle.end(), [&](std::size_t a, std::size_t b) {
      return l[static_cast<Eigen::Index>(a)] > l[static_cast<Eigen::Index>(b)];
    });
    oracle.resize(k);
    CHECK(softmax_topk(l, k) == oracle);
  }
}

TEST_CASE("absent modalities are replaced by their missing tokens") {
  const ModelShape shape;
  const ModelParams p = init_model(shape, EnvConfig{}, 13);
  Rng rng(13);
  const auto gps = test::random_observation(Modality::Gps, rng, 50.0);
  const auto seq = build_sequence(gps, std::nullopt, std::nullopt, {}, p.encoders, 4);
  REQUIRE(seq.size() == 4);
  CHECK(seq[2].embedding == p.encoders.missing_image);
  CHECK(seq[3].embedding == p.encoders.missing_lidar);
  CHECK(seq[2].tag == TokenTag::MissingImage);
  CHECK(seq[3].tag == TokenTag::MissingLidar);
}

TEST_CASE("top-k over the whole codebook contains every beam") {
  const ModelShape shape;
  const ModelParams p = init_model(shape, EnvConfig{}, 14);
  Rng rng(14);
  const auto top =
      predict_topk(test::random_observation(Modality::Gps, rng, 50.0), std::nullopt, std::nullopt, {}, p, 32);
  std::vector<std::size_t> sorted = top;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> all(32);
  std::iota(all.begin(), all.end(), std::size_t{0});
  CHECK(sorted == all);
}
