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

// Budgeted context memory. Tokens expire by TTL class and, when the budget
// is exceeded, the lowest-scoring ones are evicted where
//   score = importance_weight(tag) * freshness,
//   freshness = exp(-(now - timestamp) / ttl)   (1 for STATIC tokens).

#ifndef WCCF_STORE_HPP
#define WCCF_STORE_HPP

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "embed.hpp"

namespace wccf {

struct StoreConfig {
  std::size_t budget = 4;
  double ttl_slow = 1.0;
  double ttl_fast = 0.1;
  // Indexed by TokenTag.
  std::array<double, kNumTokenTags> weights{0.6, 1.0, 0.8, 1.0, 1.0, 1.0, 0.5};

  double ttl(TtlClass c) const {
    switch (c) {
      case TtlClass::Static: return std::numeric_limits<double>::infinity();
      case TtlClass::Slow: return ttl_slow;
      case TtlClass::Fast: return ttl_fast;
    }
    return ttl_fast;
  }
  double importance_weight(TokenTag tag) const { return weights[static_cast<std::size_t>(tag)]; }
  void validate() const;
  bool operator==(const StoreConfig&) const = default;
};

// Ages are compared with this slack so that a token stamped exactly one TTL
// ago survives despite accumulated floating-point time.
inline constexpr double kAgeSlack = 1e-9;

class ContextStore {
 public:
  explicit ContextStore(StoreConfig cfg = {});

  // Appends the token (stamping its importance from the tag weight) and
  // prioritises immediately if the budget is exceeded.
  void insert(ContextToken token, double now);
  // Drops every token older than its class TTL.
  void sweep(double now);
  // Keeps the `budget` highest-scoring tokens, preserving their order.
  void prioritize(std::size_t budget, double now);

  double score(const ContextToken& token, double now) const;

  std::span<const ContextToken> tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const StoreConfig& config() const { return cfg_; }
  void clear() { tokens_.clear(); }

 private:
  StoreConfig cfg_;
  std::vector<ContextToken> tokens_;
};

}  // namespace wccf

#endif  // WCCF_STORE_HPP
