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

#include "net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace wccf {

namespace {

// Calls fn(name, tensor, trainable) for every tensor; P may be const.
template <class P, class F>
void visit(P& p, F&& fn) {
  static constexpr const char* kEncNames[] = {"enc.gps", "enc.image", "enc.lidar"};
  for (std::size_t m = 0; m < kNumModalities; ++m) {
    auto& e = p.encoders.encoders[m];
    const std::string base = kEncNames[m];
    fn(base + ".weight", e.weight, true);
    fn(base + ".bias", e.bias, true);
    fn(base + ".offset", e.offset, false);
    fn(base + ".scale", e.scale, false);
  }
  fn(std::string("missing_image"), p.encoders.missing_image, true);
  fn(std::string("missing_lidar"), p.encoders.missing_lidar, true);
  fn(std::string("cls"), p.encoders.cls, true);
  fn(std::string("positional"), p.positional, true);
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    auto& b = p.blocks[i];
    const std::string base = "block" + std::to_string(i) + ".";
    fn(base + "ln1.gain", b.ln1.gain, true);
    fn(base + "ln1.bias", b.ln1.bias, true);
    fn(base + "wq", b.wq, true);
    fn(base + "bq", b.bq, true);
    fn(base + "wk", b.wk, true);
    fn(base + "bk", b.bk, true);
    fn(base + "wv", b.wv, true);
    fn(base + "bv", b.bv, true);
    fn(base + "wo", b.wo, true);
    fn(base + "bo", b.bo, true);
    fn(base + "ln2.gain", b.ln2.gain, true);
    fn(base + "ln2.bias", b.ln2.bias, true);
    fn(base + "w1", b.w1, true);
    fn(base + "b1", b.b1, true);
    fn(base + "w2", b.w2, true);
    fn(base + "b2", b.b2, true);
  }
  fn(std::string("final_ln.gain"), p.final_ln.gain, true);
  fn(std::string("final_ln.bias"), p.final_ln.bias, true);
  fn(std::string("head.weight"), p.head, true);
  fn(std::string("head.bias"), p.head_bias, true);
  fn(std::string("radio_map"), p.radio_map, false);
}

void expect_shape(const Mat& m, std::size_t rows, std::size_t cols, const std::string& name) {
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols)
    fail(ErrorCode::Schema, name + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}

void expect_size(const Vec& v, std::size_t n, const std::string& name) {
  if (static_cast<std::size_t>(v.size()) != n)
    fail(ErrorCode::Schema, name + " has size " + std::to_string(v.size()) + ", expected " + std::to_string(n));
}

// --- layer norm ------------------------------------------------------------

struct LnCache {
  Mat xhat;
  Vec rstd;
};

void ln_forward(const Mat& x, const LayerNormParams& p, Mat& y, LnCache& c) {
  const auto n = x.rows();
  const auto d = x.cols();
  c.xhat.resize(n, d);
  c.rstd.resize(n);
  y.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = x.row(i).mean();
    const double var = (x.row(i).array() - mean).square().mean();
    const double rstd = 1.0 / std::sqrt(var + kLayerNormEps);
    c.rstd[i] = rstd;
    c.xhat.row(i) = (x.row(i).array() - mean) * rstd;
    y.row(i) = c.xhat.row(i).array() * p.gain.transpose().array() + p.bias.transpose().array();
  }
}

void ln_backward(const Mat& dy, const LayerNormParams& p, const LnCache& c, LayerNormParams& g, Mat& dx) {
  const auto n = dy.rows();
  const auto d = static_cast<double>(dy.cols());
  dx.resize(n, dy.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    g.gain.array() += (dy.row(i).array() * c.xhat.row(i).array()).transpose();
    g.bias += dy.row(i).transpose();
    const Eigen::RowVectorXd dxhat = dy.row(i).array() * p.gain.transpose().array();
    const double mean_dxhat = dxhat.sum() / d;
    const double mean_dxhat_xhat = dxhat.dot(c.xhat.row(i)) / d;
    dx.row(i) = c.rstd[i] * (dxhat.array() - mean_dxhat - c.xhat.row(i).array() * mean_dxhat_xhat);
  }
}

// --- affine ----------------------------------------------------------------

// y = x W^T + b
void affine(const Mat& x, const Mat& w, const Vec& b, Mat& y) {
  y.noalias() = x * w.transpose();
  y.rowwise() += b.transpose();
}

void affine_backward(const Mat& dy, const Mat& x, const Mat& w, Mat& dw, Vec& db, Mat* dx) {
  dw.noalias() += dy.transpose() * x;
  db += dy.colwise().sum().transpose();
  if (dx) dx->noalias() = dy * w;
}

// --- GELU (tanh approximation) ---------------------------------------------

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluA = 0.044715;

double gelu(double x) { return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x))); }

double gelu_grad(double x) {
  const double t = std::tanh(kGeluC * (x + kGeluA * x * x * x));
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * x * x);
}

// --- forward / backward ----------------------------------------------------

struct BlockCache {
  Mat x_in;
  LnCache ln1;
  Mat a, q, k, v;
  Mat probs;  // (B*H*T) x T
  Mat o;
  Mat h;
  LnCache ln2;
  Mat bn, pre, act;
};

struct Cache {
  std::size_t batch = 0;
  std::size_t seq = 0;
  std::vector<std::size_t> lengths;
  std::vector<BlockCache> blocks;
  Mat cls_rows;
  LnCache lnf;
  Mat cls_norm;
};

// tokens: (B*T) x d, sequence b in rows [b*T, b*T + lengths[b]); rows beyond
// a sequence's length are padding and masked out as attention keys.
Mat run_forward(const ModelParams& p, const Mat& tokens, std::size_t batch, std::size_t seq,
                std::span<const std::size_t> lengths, Cache& c) {
  const auto& s = p.shape;
  const auto T = static_cast<Eigen::Index>(seq);
  const auto H = static_cast<Eigen::Index>(s.num_heads);
  const auto dh = static_cast<Eigen::Index>(s.head_dim());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  c.batch = batch;
  c.seq = seq;
  c.lengths.assign(lengths.begin(), lengths.end());
  c.blocks.resize(p.blocks.size());

  Mat x = tokens;
  for (std::size_t b = 0; b < batch; ++b)
    for (Eigen::Index t = 0; t < T; ++t) x.row(static_cast<Eigen::Index>(b) * T + t) += p.positional.row(t);

  Mat z, f, scores;
  for (std::size_t l = 0; l < p.blocks.size(); ++l) {
    const auto& bp = p.blocks[l];
    auto& bc = c.blocks[l];
    bc.x_in = x;
    ln_forward(x, bp.ln1, bc.a, bc.ln1);
    affine(bc.a, bp.wq, bp.bq, bc.q);
    affine(bc.a, bp.wk, bp.bk, bc.k);
    affine(bc.a, bp.wv, bp.bv, bc.v);
    bc.probs.resize(static_cast<Eigen::Index>(batch) * H * T, T);
    bc.o.resize(x.rows(), x.cols());
    for (std::size_t b = 0; b < batch; ++b) {
      const auto r0 = static_cast<Eigen::Index>(b) * T;
      const auto len = static_cast<Eigen::Index>(lengths[b]);
      for (Eigen::Index h = 0; h < H; ++h) {
        auto qh = bc.q.block(r0, h * dh, T, dh);
        auto kh = bc.k.block(r0, h * dh, T, dh);
        auto vh = bc.v.block(r0, h * dh, T, dh);
        scores.noalias() = qh * kh.transpose();
        scores *= scale;
        auto pr = bc.probs.block((static_cast<Eigen::Index>(b) * H + h) * T, 0, T, T);
        for (Eigen::Index i = 0; i < T; ++i) {
          const double mx = scores.row(i).head(len).maxCoeff();
          double sum = 0.0;
          for (Eigen::Index j = 0; j < T; ++j) {
            const double e = j < len ? std::exp(scores(i, j) - mx) : 0.0;
            pr(i, j) = e;
            sum += e;
          }
          pr.row(i) /= sum;
        }
        bc.o.block(r0, h * dh, T, dh).noalias() = pr * vh;
      }
    }
    affine(bc.o, bp.wo, bp.bo, z);
    bc.h = x + z;
    ln_forward(bc.h, bp.ln2, bc.bn, bc.ln2);
    affine(bc.bn, bp.w1, bp.b1, bc.pre);
    bc.act = bc.pre.unaryExpr([](double v) { return gelu(v); });
    affine(bc.act, bp.w2, bp.b2, f);
    x = bc.h + f;
  }

  c.cls_rows.resize(static_cast<Eigen::Index>(batch), x.cols());
  for (std::size_t b = 0; b < batch; ++b) c.cls_rows.row(static_cast<Eigen::Index>(b)) = x.row(static_cast<Eigen::Index>(b) * T);
  ln_forward(c.cls_rows, p.final_ln, c.cls_norm, c.lnf);
  Mat logits;
  affine(c.cls_norm, p.head, p.head_bias, logits);
  return logits;
}

// Accumulates parameter gradients into g and returns d(loss)/d(tokens).
Mat run_backward(const ModelParams& p, const Cache& c, const Mat& dlogits, ModelParams& g) {
  const auto& s = p.shape;
  const auto T = static_cast<Eigen::Index>(c.seq);
  const auto H = static_cast<Eigen::Index>(s.num_heads);
  const auto dh = static_cast<Eigen::Index>(s.head_dim());
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const auto batch = static_cast<Eigen::Index>(c.batch);
  const auto d = static_cast<Eigen::Index>(s.d_model);

  Mat dcls_norm;
  affine_backward(dlogits, c.cls_norm, p.head, g.head, g.head_bias, &dcls_norm);
  Mat dcls;
  ln_backward(dcls_norm, p.final_ln, c.lnf, g.final_ln, dcls);

  Mat dx = Mat::Zero(batch * T, d);
  for (Eigen::Index b = 0; b < batch; ++b) dx.row(b * T) = dcls.row(b);

  Mat dact, dpre, dbn, dh_ln, dz, dob, dq, dk, dv, da, dtmp, dP, dS;
  for (std::size_t li = p.blocks.size(); li-- > 0;) {
    const auto& bp = p.blocks[li];
    auto& bg = g.blocks[li];
    const auto& bc = c.blocks[li];

    // y = h + ffn(LN2(h))
    affine_backward(dx, bc.act, bp.w2, bg.w2, bg.b2, &dact);
    dpre = dact.array() * bc.pre.unaryExpr([](double v) { return gelu_grad(v); }).array();
    affine_backward(dpre, bc.bn, bp.w1, bg.w1, bg.b1, &dbn);
    ln_backward(dbn, bp.ln2, bc.ln2, bg.ln2, dh_ln);
    Mat dh_total = dx + dh_ln;

    // h = x + attn(LN1(x))
    affine_backward(dh_total, bc.o, bp.wo, bg.wo, bg.bo, &dob);
    dq = Mat::Zero(batch * T, d);
    dk = Mat::Zero(batch * T, d);
    dv = Mat::Zero(batch * T, d);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const auto r0 = b * T;
      for (Eigen::Index h = 0; h < H; ++h) {
        const auto pr = bc.probs.block((b * H + h) * T, 0, T, T);
        const auto qh = bc.q.block(r0, h * dh, T, dh);
        const auto kh = bc.k.block(r0, h * dh, T, dh);
        const auto vh = bc.v.block(r0, h * dh, T, dh);
        const auto doh = dob.block(r0, h * dh, T, dh);
        dP.noalias() = doh * vh.transpose();
        dv.block(r0, h * dh, T, dh).noalias() += pr.transpose() * doh;
        dS.resize(T, T);
        for (Eigen::Index i = 0; i < T; ++i) {
          const double rs = dP.row(i).dot(pr.row(i));
          dS.row(i) = pr.row(i).array() * (dP.row(i).array() - rs);
        }
        dS *= scale;
        dq.block(r0, h * dh, T, dh).noalias() += dS * kh;
        dk.block(r0, h * dh, T, dh).noalias() += dS.transpose() * qh;
      }
    }
    affine_backward(dq, bc.a, bp.wq, bg.wq, bg.bq, &da);
    affine_backward(dk, bc.a, bp.wk, bg.wk, bg.bk, &dtmp);
    da += dtmp;
    affine_backward(dv, bc.a, bp.wv, bg.wv, bg.bv, &dtmp);
    da += dtmp;
    ln_backward(da, bp.ln1, bc.ln1, bg.ln1, dtmp);
    dx = dh_total + dtmp;
  }

  for (Eigen::Index b = 0; b < batch; ++b)
    for (Eigen::Index t = 0; t < T; ++t) g.positional.row(t) += dx.row(b * T + t);
  return dx;
}

void check_sequence(std::span<const ContextToken> sequence, const ModelParams& params) {
  const auto& s = params.shape;
  if (sequence.size() < kFixedSlots || sequence.size() > s.max_seq)
    fail(ErrorCode::Schema, "sequence length " + std::to_string(sequence.size()) + " outside [" +
                                std::to_string(kFixedSlots) + ", " + std::to_string(s.max_seq) + "]");
  for (const auto& tok : sequence)
    if (static_cast<std::size_t>(tok.embedding.size()) != s.d_model)
      fail(ErrorCode::Schema, "token embedding dimension " + std::to_string(tok.embedding.size()) +
                                  " does not match d_model " + std::to_string(s.d_model));
}

Eigen::RowVectorXd source_row(const SlotSource& src, const ModelParams& p, Vec* normalised) {
  switch (src.kind) {
    case SlotSource::Kind::Cls: return p.encoders.cls.transpose();
    case SlotSource::Kind::MissingImage: return p.encoders.missing_image.transpose();
    case SlotSource::Kind::MissingLidar: return p.encoders.missing_lidar.transpose();
    case SlotSource::Kind::RadioMap:
      if (src.bucket >= static_cast<std::size_t>(p.radio_map.rows()))
        fail(ErrorCode::Contract, "radio map bucket out of range");
      return p.radio_map.row(static_cast<Eigen::Index>(src.bucket));
    case SlotSource::Kind::Encoded: {
      const auto& enc = p.encoders.encoder(src.modality);
      Vec xn = enc.normalise(std::span<const double>(src.features.data(), feature_dim(src.modality)));
      Eigen::RowVectorXd row = (enc.weight * xn + enc.bias).array().tanh().matrix().transpose();
      if (normalised) *normalised = std::move(xn);
      return row;
    }
  }
  return {};
}

struct BatchTokens {
  Mat tokens;
  std::size_t seq = 0;
  std::vector<std::size_t> lengths;
  std::vector<Vec> normalised;  // per (b, t) for encoded slots
};

BatchTokens assemble(std::span<const Sample> batch, const ModelParams& p, bool keep_inputs) {
  BatchTokens bt;
  for (const auto& s : batch) bt.seq = std::max(bt.seq, s.slots.size());
  if (bt.seq < kFixedSlots || bt.seq > p.shape.max_seq)
    fail(ErrorCode::Schema, "sample sequence length outside [4, max_seq]");
  const auto T = static_cast<Eigen::Index>(bt.seq);
  bt.tokens = Mat::Zero(static_cast<Eigen::Index>(batch.size()) * T, static_cast<Eigen::Index>(p.shape.d_model));
  if (keep_inputs) bt.normalised.resize(batch.size() * bt.seq);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& s = batch[b];
    if (s.slots.size() < kFixedSlots) fail(ErrorCode::Schema, "sample has fewer than 4 slots");
    if (s.label >= p.shape.num_beams) fail(ErrorCode::Contract, "label outside the codebook");
    bt.lengths.push_back(s.slots.size());
    for (std::size_t t = 0; t < s.slots.size(); ++t)
      bt.tokens.row(static_cast<Eigen::Index>(b) * T + static_cast<Eigen::Index>(t)) =
          source_row(s.slots[t], p, keep_inputs ? &bt.normalised[b * bt.seq + t] : nullptr);
  }
  return bt;
}

double cross_entropy(const Mat& logits, std::span<const Sample> batch, Mat* dlogits) {
  double loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  if (dlogits) dlogits->resize(logits.rows(), logits.cols());
  for (Eigen::Index b = 0; b < logits.rows(); ++b) {
    const double mx = logits.row(b).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(b).array() - mx).exp();
    const double sum = e.sum();
    const auto label = static_cast<Eigen::Index>(batch[static_cast<std::size_t>(b)].label);
    loss += std::log(sum) + mx - logits(b, label);
    if (dlogits) {
      dlogits->row(b) = e / sum * inv_b;
      (*dlogits)(b, label) -= inv_b;
    }
  }
  return loss * inv_b;
}

}  // namespace

void ModelShape::validate() const {
  if (d_model == 0 || num_heads == 0 || d_model % num_heads != 0)
    fail(ErrorCode::Schema, "d_model must be a positive multiple of num_heads");
  if (num_blocks == 0 || ffn_hidden == 0 || num_beams == 0 || radio_map_buckets == 0)
    fail(ErrorCode::Schema, "model sizes must be positive");
  if (max_seq < kFixedSlots) fail(ErrorCode::Schema, "max_seq must be at least 4");
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  for_each_tensor(z, [](std::string_view, double* data, std::size_t n, bool) { std::fill(data, data + n, 0.0); });
  return z;
}

void ModelParams::validate() const {
  shape.validate();
  const auto& s = shape;
  encoders.validate();
  if (encoders.d_model() != s.d_model) fail(ErrorCode::Schema, "encoder d_model differs from model d_model");
  expect_shape(positional, s.max_seq, s.d_model, "positional");
  if (blocks.size() != s.num_blocks)
    fail(ErrorCode::Schema, "expected " + std::to_string(s.num_blocks) + " blocks, found " + std::to_string(blocks.size()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    const std::string n = "block" + std::to_string(i) + ".";
    for (const auto* ln : {&b.ln1, &b.ln2}) {
      expect_size(ln->gain, s.d_model, n + "ln.gain");
      expect_size(ln->bias, s.d_model, n + "ln.bias");
    }
    for (const auto* w : {&b.wq, &b.wk, &b.wv, &b.wo}) expect_shape(*w, s.d_model, s.d_model, n + "attention weight");
    for (const auto* v : {&b.bq, &b.bk, &b.bv, &b.bo, &b.b2}) expect_size(*v, s.d_model, n + "bias");
    expect_shape(b.w1, s.ffn_hidden, s.d_model, n + "w1");
    expect_size(b.b1, s.ffn_hidden, n + "b1");
    expect_shape(b.w2, s.d_model, s.ffn_hidden, n + "w2");
  }
  expect_size(final_ln.gain, s.d_model, "final_ln.gain");
  expect_size(final_ln.bias, s.d_model, "final_ln.bias");
  expect_shape(head, s.num_beams, s.d_model, "head.weight");
  expect_size(head_bias, s.num_beams, "head.bias");
  expect_shape(radio_map, s.radio_map_buckets, s.d_model, "radio_map");
}

bool ModelParams::all_finite() const {
  bool ok = true;
  for_each_tensor(*this, [&](std::string_view, const double* data, std::size_t n, bool) {
    for (std::size_t i = 0; i < n; ++i) ok = ok && std::isfinite(data[i]);
  });
  return ok;
}

ModelParams zero_model(const ModelShape& shape, const EnvConfig& env) {
  shape.validate();
  const auto d = static_cast<Eigen::Index>(shape.d_model);
  const auto f = static_cast<Eigen::Index>(shape.ffn_hidden);
  ModelParams p;
  p.shape = shape;
  p.encoders = EncoderParams::zeros(shape.d_model, env);
  p.positional = Mat::Zero(static_cast<Eigen::Index>(shape.max_seq), d);
  p.blocks.resize(shape.num_blocks);
  for (auto& b : p.blocks) {
    b.ln1 = {Vec::Zero(d), Vec::Zero(d)};
    b.ln2 = {Vec::Zero(d), Vec::Zero(d)};
    b.wq = b.wk = b.wv = b.wo = Mat::Zero(d, d);
    b.bq = b.bk = b.bv = b.bo = b.b2 = Vec::Zero(d);
    b.w1 = Mat::Zero(f, d);
    b.b1 = Vec::Zero(f);
    b.w2 = Mat::Zero(d, f);
  }
  p.final_ln = {Vec::Zero(d), Vec::Zero(d)};
  p.head = Mat::Zero(static_cast<Eigen::Index>(shape.num_beams), d);
  p.head_bias = Vec::Zero(static_cast<Eigen::Index>(shape.num_beams));
  p.radio_map = Mat::Zero(static_cast<Eigen::Index>(shape.radio_map_buckets), d);
  return p;
}

ModelParams init_model(const ModelShape& shape, const EnvConfig& env, std::uint64_t seed) {
  ModelParams p = zero_model(shape, env);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto fill = [&](auto& m, double fan_in) {
    const double sc = 1.0 / std::sqrt(fan_in);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng) * sc;
  };
  const auto d = static_cast<double>(shape.d_model);
  for (auto& e : p.encoders.encoders) fill(e.weight, static_cast<double>(e.weight.cols()));
  fill(p.encoders.missing_image, d);
  fill(p.encoders.missing_lidar, d);
  fill(p.encoders.cls, d);
  fill(p.positional, d);
  for (auto& b : p.blocks) {
    b.ln1.gain.setOnes();
    b.ln2.gain.setOnes();
    for (auto* w : {&b.wq, &b.wk, &b.wv, &b.wo}) fill(*w, d);
    fill(b.w1, d);
    fill(b.w2, static_cast<double>(shape.ffn_hidden));
  }
  p.final_ln.gain.setOnes();
  fill(p.head, d);
  return p;
}

void for_each_tensor(ModelParams& params, const TensorVisitor& fn) {
  visit(params, [&](const std::string& name, auto& t, bool trainable) {
    fn(name, t.data(), static_cast<std::size_t>(t.size()), trainable);
  });
}

void for_each_tensor(const ModelParams& params, const ConstTensorVisitor& fn) {
  visit(params, [&](const std::string& name, const auto& t, bool trainable) {
    fn(name, t.data(), static_cast<std::size_t>(t.size()), trainable);
  });
}

Vec forward(std::span<const ContextToken> sequence, const ModelParams& params) {
  check_sequence(sequence, params);
  const auto T = static_cast<Eigen::Index>(sequence.size());
  Mat tokens(T, static_cast<Eigen::Index>(params.shape.d_model));
  for (Eigen::Index t = 0; t < T; ++t) tokens.row(t) = sequence[static_cast<std::size_t>(t)].embedding.transpose();
  const std::size_t len = sequence.size();
  Cache cache;
  const Mat logits = run_forward(params, tokens, 1, sequence.size(), std::span<const std::size_t>(&len, 1), cache);
  return logits.row(0).transpose();
}

Vec softmax(const Vec& logits) {
  const double mx = logits.maxCoeff();
  Vec e = (logits.array() - mx).exp().matrix();
  return e / e.sum();
}

std::vector<std::size_t> softmax_topk(const Vec& logits, std::size_t k) {
  const auto n = static_cast<std::size_t>(logits.size());
  if (k == 0 || k > n)
    fail(ErrorCode::Contract, "softmax_topk: k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  const Vec prob = softmax(logits);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const auto pa = prob[static_cast<Eigen::Index>(a)];
                      const auto pb = prob[static_cast<Eigen::Index>(b)];
                      return pa > pb || (pa == pb && a < b);
                    });
  idx.resize(k);
  return idx;
}

Prediction predict(std::span<const ContextToken> sequence, const ModelParams& params, std::size_t k) {
  const Vec logits = forward(sequence, params);
  Prediction out;
  out.topk = softmax_topk(logits, k);
  out.top1_prob = softmax(logits)[static_cast<Eigen::Index>(out.topk.front())];
  return out;
}

std::vector<std::size_t> predict_topk(const Observation& gps, const std::optional<Observation>& image,
                                      const std::optional<Observation>& lidar,
                                      std::span<const ContextToken> history, const ModelParams& params,
                                      std::size_t k) {
  const auto seq = build_sequence(gps, image, lidar, history, params.encoders, params.shape.max_seq - kFixedSlots);
  return softmax_topk(forward(seq, params), k);
}

SlotSource SlotSource::encoded(const Observation& obs) {
  obs.validate();
  SlotSource s;
  s.kind = Kind::Encoded;
  s.modality = obs.modality;
  std::copy(obs.features.begin(), obs.features.end(), s.features.begin());
  return s;
}

std::vector<ContextToken> materialise(const Sample& sample, const ModelParams& params) {
  std::vector<ContextToken> seq;
  for (const auto& src : sample.slots) {
    ContextToken tok;
    tok.embedding = source_row(src, params, nullptr).transpose();
    switch (src.kind) {
      case SlotSource::Kind::Cls: tok.tag = TokenTag::Cls; break;
      case SlotSource::Kind::MissingImage: tok.tag = TokenTag::MissingImage; break;
      case SlotSource::Kind::MissingLidar: tok.tag = TokenTag::MissingLidar; break;
      case SlotSource::Kind::RadioMap: tok.tag = TokenTag::RadioMap; tok.ttl = TtlClass::Static; break;
      case SlotSource::Kind::Encoded: tok.tag = tag_of(src.modality); break;
    }
    seq.push_back(std::move(tok));
  }
  return seq;
}

double batch_loss(std::span<const Sample> batch, const ModelParams& params) {
  if (batch.empty()) fail(ErrorCode::Contract, "batch_loss: empty batch");
  auto bt = assemble(batch, params, false);
  Cache cache;
  const Mat logits = run_forward(params, bt.tokens, batch.size(), bt.seq, bt.lengths, cache);
  return cross_entropy(logits, batch, nullptr);
}

LossAndGrad loss_and_grad(std::span<const Sample> batch, const ModelParams& params) {
  if (batch.empty()) fail(ErrorCode::Contract, "loss_and_grad: empty batch");
  auto bt = assemble(batch, params, true);
  Cache cache;
  const Mat logits = run_forward(params, bt.tokens, batch.size(), bt.seq, bt.lengths, cache);
  Mat dlogits;
  LossAndGrad out;
  out.loss = cross_entropy(logits, batch, &dlogits);
  out.grad = params.zeros_like();
  const Mat dtokens = run_backward(params, cache, dlogits, out.grad);

  const auto T = static_cast<Eigen::Index>(bt.seq);
  auto& ge = out.grad.encoders;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    for (std::size_t t = 0; t < batch[b].slots.size(); ++t) {
      const auto r = static_cast<Eigen::Index>(b) * T + static_cast<Eigen::Index>(t);
      const auto& src = batch[b].slots[t];
      const Vec dtok = dtokens.row(r).transpose();
      switch (src.kind) {
        case SlotSource::Kind::Cls: ge.cls += dtok; break;
        case SlotSource::Kind::MissingImage: ge.missing_image += dtok; break;
        case SlotSource::Kind::MissingLidar: ge.missing_lidar += dtok; break;
        case SlotSource::Kind::RadioMap: break;
        case SlotSource::Kind::Encoded: {
          const Vec e = bt.tokens.row(r).transpose();
          const Vec dz = dtok.array() * (1.0 - e.array().square());
          auto& enc = ge.encoder(src.modality);
          enc.weight.noalias() += dz * bt.normalised[b * bt.seq + t].transpose();
          enc.bias += dz;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace wccf
