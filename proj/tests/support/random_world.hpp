// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "narrinfo/synthworld.hpp"

namespace narrinfo::testing {

struct WorldLimits {
  int max_contexts = 8;
  int max_meanings = 6;
  int max_wordings = 5;
};

// Normalised random weights; roughly one entry in ten is zeroed but at least
// one stays positive.
inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n, bool zeros) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::bernoulli_distribution drop(0.1);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    x = (zeros && drop(rng)) ? 0.0 : u(rng);
    sum += x;
  }
  if (sum == 0.0) {
    w[0] = 1.0;
    sum = 1.0;
  }
  for (auto& x : w) x /= sum;
  return w;
}

inline nlohmann::json random_world_json(std::mt19937_64& rng, const WorldLimits& lim = {}) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n_ctx = pick(1, lim.max_contexts);
  const int n_mean = pick(1, lim.max_meanings);
  std::vector<std::string> contexts, meanings;
  for (int c = 0; c < n_ctx; ++c) contexts.push_back("c" + std::to_string(c));
  for (int m = 0; m < n_mean; ++m) meanings.push_back("M" + std::to_string(m));
  std::vector<std::vector<std::string>> pools(n_mean);
  for (int m = 0; m < n_mean; ++m) {
    const int k = pick(1, lim.max_wordings);
    for (int w = 0; w < k; ++w) pools[m].push_back("w" + std::to_string(m) + "_" + std::to_string(w));
  }

  nlohmann::json j;
  j["contexts"] = contexts;
  j["initial_context"] = contexts[static_cast<std::size_t>(pick(0, n_ctx - 1))];
  for (const auto& c : contexts) {
    const auto pm = random_weights(rng, meanings.size(), true);
    for (int m = 0; m < n_mean; ++m) {
      j["meanings"][c][meanings[m]] = pm[m];
      // Each meaning uses a random non-empty subset of its own pool here.
      std::vector<std::string> subset;
      for (const auto& w : pools[m]) {
        if (std::bernoulli_distribution(0.7)(rng)) subset.push_back(w);
      }
      if (subset.empty()) subset.push_back(pools[m].front());
      const auto pw = random_weights(rng, subset.size(), true);
      for (std::size_t i = 0; i < subset.size(); ++i) {
        j["wordings"][meanings[m]][c][subset[i]] = pw[i];
        j["transitions"][c][subset[i]] = contexts[static_cast<std::size_t>(pick(0, n_ctx - 1))];
      }
    }
  }
  return j;
}

inline MeaningWorld random_world(std::mt19937_64& rng, const WorldLimits& lim = {}) {
  return MeaningWorld::from_json(random_world_json(rng, lim));
}

}  // namespace narrinfo::testing
