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

#include "store.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wccf {

void StoreConfig::validate() const {
  if (!(ttl_slow > 0.0) || !(ttl_fast > 0.0)) fail(ErrorCode::Config, "store TTLs must be positive");
  for (double w : weights)
    if (!(w >= 0.0)) fail(ErrorCode::Config, "store importance weights must be nonnegative");
}

ContextStore::ContextStore(StoreConfig cfg) : cfg_(cfg) { cfg_.validate(); }

double ContextStore::score(const ContextToken& token, double now) const {
  const double ttl = cfg_.ttl(token.ttl);
  const double freshness = std::isinf(ttl) ? 1.0 : std::exp(-(now - token.timestamp) / ttl);
  return cfg_.importance_weight(token.tag) * freshness;
}

void ContextStore::insert(ContextToken token, double now) {
  if (token.timestamp > now)
    fail(ErrorCode::Contract, "insert: token timestamp " + std::to_string(token.timestamp) + " is after now " +
                                  std::to_string(now));
  token.importance = cfg_.importance_weight(token.tag);
  tokens_.push_back(std::move(token));
  if (tokens_.size() > cfg_.budget) prioritize(cfg_.budget, now);
}

void ContextStore::sweep(double now) {
  std::erase_if(tokens_, [&](const ContextToken& t) {
    const double ttl = cfg_.ttl(t.ttl);
    return !std::isinf(ttl) && (now - t.timestamp) > ttl + kAgeSlack;
  });
}

void ContextStore::prioritize(std::size_t budget, double now) {
  if (tokens_.size() <= budget) return;
  std::vector<std::size_t> order(tokens_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> scores(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) scores[i] = score(tokens_[i], now);
  // Best first: higher score, then more recent, then earlier insertion.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return tokens_[a].timestamp > tokens_[b].timestamp;
  });
  order.resize(budget);
  std::sort(order.begin(), order.end());
  std::vector<ContextToken> kept;
  kept.reserve(budget);
  for (std::size_t i : order) kept.push_back(std::move(tokens_[i]));
  tokens_ = std::move(kept);
}

}  // namespace wccf
