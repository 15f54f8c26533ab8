// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/ngram.hpp"

#include <cmath>

#include "narrinfo/error.hpp"

namespace narrinfo {

NgramModel NgramModel::train(std::string_view training_text, int order,
                             double alpha, std::string_view extra_alphabet) {
  if (training_text.empty()) fail(ErrorKind::EmptyTraining, "no training text");
  if (order < 1) fail(ErrorKind::InvalidArgument, "order must be >= 1");
  if (!(alpha > 0.0)) fail(ErrorKind::InvalidArgument, "alpha must be > 0");

  NgramModel m;
  m.order_ = order;
  m.alpha_ = alpha;
  const auto chars = utf8_decode(training_text);
  for (char32_t ch : chars) m.alphabet_.insert(ch);
  for (char32_t ch : utf8_decode(extra_alphabet)) m.alphabet_.insert(ch);

  const auto n = static_cast<std::size_t>(order);
  for (std::size_t j = n; j < chars.size(); ++j) {
    auto& slot = m.counts_[chars.substr(j - n, n)];
    ++slot.next[chars[j]];
    ++slot.total;
  }

  std::string alphabet_utf8;
  for (char32_t ch : m.alphabet_) alphabet_utf8 += utf8_encode(ch);
  m.fingerprint_ = sha256_hex(std::string(training_text) + '\0' +
                              alphabet_utf8 + '\0' + std::to_string(order) +
                              '\0' + format_double(alpha))
                       .substr(0, 12);
  return m;
}

NgramModel NgramModel::uniform(std::string_view alphabet, int order,
                               double alpha) {
  if (alphabet.empty()) fail(ErrorKind::EmptyTraining, "empty alphabet");
  // A training text no longer than `order` yields no counted context.
  const auto chars = utf8_decode(alphabet);
  return train(utf8_encode(chars.front()), order, alpha, alphabet);
}

std::size_t NgramModel::count(std::u32string_view context, char32_t ch) const {
  if (context.size() < static_cast<std::size_t>(order_)) return 0;
  auto it = counts_.find(std::u32string(context.substr(context.size() - order_)));
  if (it == counts_.end()) return 0;
  auto jt = it->second.next.find(ch);
  return jt == it->second.next.end() ? 0 : jt->second;
}

std::size_t NgramModel::context_total(std::u32string_view context) const {
  if (context.size() < static_cast<std::size_t>(order_)) return 0;
  auto it = counts_.find(std::u32string(context.substr(context.size() - order_)));
  return it == counts_.end() ? 0 : it->second.total;
}

double NgramModel::probability(std::u32string_view context, char32_t ch) const {
  if (!in_alphabet(ch)) {
    fail(ErrorKind::OutOfAlphabet,
         "character U+" + std::to_string(static_cast<unsigned long>(ch)) +
             " is not in the model alphabet");
  }
  const double k = static_cast<double>(alphabet_.size());
  return (static_cast<double>(count(context, ch)) + alpha_) /
         (static_cast<double>(context_total(context)) + alpha_ * k);
}

NgramBackend::NgramBackend(NgramModel model)
    : model_(std::move(model)),
      id_("ngram-o" + std::to_string(model_.order()) + "-a" +
          format_double(model_.alpha()) + "-" + model_.fingerprint()) {}

ScoredText NgramBackend::score(std::string_view text) const {
  if (text.empty()) fail(ErrorKind::InvalidArgument, "cannot score empty text");
  const auto chars = utf8_decode(text);
  const auto lengths = utf8_char_lengths(text);
  ScoredText out;
  out.text = std::string(text);
  out.backend_id = id_;
  out.tokens.reserve(chars.size());
  std::size_t pos = 0;
  const std::u32string_view view(chars);
  for (std::size_t j = 0; j < chars.size(); ++j) {
    const double p = model_.probability(view.substr(0, j), chars[j]);
    const double bits = -std::log2(p);
    out.tokens.push_back({std::string(text.substr(pos, lengths[j])),
                          {pos, pos + lengths[j]},
                          bits == 0.0 ? 0.0 : bits});
    pos += lengths[j];
  }
  out.total_bits = sum_bits(out.tokens);
  return out;
}

}  // namespace narrinfo
