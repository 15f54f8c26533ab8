// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

#include "narrinfo/lm_backend.hpp"

namespace narrinfo {

/// Laplace-smoothed character model conditioned on the previous `order`
/// codepoints:
///
///   P(ch | ctx) = (count(ctx, ch) + alpha) / (count(ctx) + alpha * |A|)
///
/// Only full-length contexts are counted, so the first `order` characters of
/// any scored text (and any unseen context) are uniform over the alphabet A.
class NgramModel {
 public:
  static NgramModel train(std::string_view training_text, int order,
                          double alpha, std::string_view extra_alphabet = {});
  static NgramModel uniform(std::string_view alphabet, int order = 1,
                            double alpha = 1.0);

  int order() const { return order_; }
  double alpha() const { return alpha_; }
  const std::set<char32_t>& alphabet() const { return alphabet_; }
  bool in_alphabet(char32_t ch) const { return alphabet_.contains(ch); }

  std::size_t count(std::u32string_view context, char32_t ch) const;
  std::size_t context_total(std::u32string_view context) const;

  /// `context` is the full preceding text; only its last `order` codepoints
  /// are used. Throws OutOfAlphabet for unknown characters.
  double probability(std::u32string_view context, char32_t ch) const;

  /// Fingerprint of the training data and parameters.
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  struct ContextCounts {
    std::unordered_map<char32_t, std::size_t> next;
    std::size_t total = 0;
  };

  NgramModel() = default;

  int order_ = 1;
  double alpha_ = 1.0;
  std::set<char32_t> alphabet_;
  std::unordered_map<std::u32string, ContextCounts> counts_;
  std::string fingerprint_;
};

/// One codepoint per token.
class NgramBackend final : public Backend {
 public:
  explicit NgramBackend(NgramModel model);

  std::string id() const override { return id_; }
  ScoredText score(std::string_view text) const override;

  const NgramModel& model() const { return model_; }

 private:
  NgramModel model_;
  std::string id_;
};

}  // namespace narrinfo
