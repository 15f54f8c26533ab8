// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <set>
#include <string>
#include <string_view>

#include "narrinfo/text_util.hpp"

namespace narrinfo::testing {

// Direct-count reference for a Laplace-smoothed character model whose
// context is the preceding `order` codepoints. Every probability is obtained
// by scanning the training text, with no shared tables.
class BruteForceNgram {
 public:
  BruteForceNgram(std::string_view training, int order, double alpha,
                  std::string_view extra = {})
      : train_(utf8_decode(training)), order_(order), alpha_(alpha) {
    for (char32_t c : train_) alphabet_.insert(c);
    for (char32_t c : utf8_decode(extra)) alphabet_.insert(c);
  }

  double probability(const std::u32string& prefix, char32_t ch) const {
    const auto n = static_cast<std::size_t>(order_);
    double count = 0.0;
    double total = 0.0;
    if (prefix.size() >= n) {
      const auto ctx = prefix.substr(prefix.size() - n);
      for (std::size_t i = n; i < train_.size(); ++i) {
        if (train_.compare(i - n, n, ctx) != 0) continue;
        total += 1.0;
        if (train_[i] == ch) count += 1.0;
      }
    }
    return (count + alpha_) / (total + alpha_ * static_cast<double>(alphabet_.size()));
  }

  // Product of conditionals of `text` after `context`, in bits.
  double bits(std::string_view context, std::string_view text) const {
    std::u32string prefix = utf8_decode(context);
    double p = 1.0;
    for (char32_t ch : utf8_decode(text)) {
      p *= probability(prefix, ch);
      prefix.push_back(ch);
    }
    return -std::log2(p);
  }

 private:
  std::u32string train_;
  int order_;
  double alpha_;
  std::set<char32_t> alphabet_;
};

}  // namespace narrinfo::testing
