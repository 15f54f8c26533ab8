// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "narrinfo/error.hpp"
#include "narrinfo/lm_backend.hpp"

namespace narrinfo::testing {

// Generator replaying canned responses in order and recording each request.
class ScriptedGenerator final : public Backend {
 public:
  explicit ScriptedGenerator(std::deque<std::string> replies) : replies_(std::move(replies)) {}

  std::string id() const override { return "scripted"; }
  ScoredText score(std::string_view) const override {
    fail(ErrorKind::UnsupportedBackend, "scripted generator cannot score");
  }
  std::string generate(std::span<const ChatMessage> messages,
                       const GenerationParams&) const override {
    std::lock_guard lock(mu_);
    requests_.emplace_back(messages.begin(), messages.end());
    if (replies_.empty()) fail(ErrorKind::EndpointError, "script exhausted");
    auto r = std::move(replies_.front());
    replies_.pop_front();
    return r;
  }

  std::vector<std::vector<ChatMessage>> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }

 private:
  mutable std::mutex mu_;
  mutable std::deque<std::string> replies_;
  mutable std::vector<std::vector<ChatMessage>> requests_;
};

// Splits text into tokens of leading whitespace plus a word and asks `bits`
// for each token's information.
class FunctionBackend final : public Backend {
 public:
  using BitsFn = std::function<double(std::string_view text, ByteSpan token)>;

  explicit FunctionBackend(BitsFn fn, std::vector<std::string> split_words = {})
      : fn_(std::move(fn)), split_(std::move(split_words)) {}

  std::string id() const override { return "function"; }

  ScoredText score(std::string_view text) const override {
    ScoredText out;
    out.text = std::string(text);
    out.backend_id = id();
    std::size_t pos = 0;
    while (pos < text.size()) {
      const std::size_t start = pos;
      while (pos < text.size() && is_space(text[pos])) ++pos;
      const std::size_t word = pos;
      while (pos < text.size() && !is_space(text[pos])) ++pos;
      // Optional subword split, e.g. "cramps" -> "cr" + "amps".
      std::size_t cut = pos;
      for (const auto& s : split_) {
        const auto at = s.find('|');
        const auto whole = s.substr(0, at) + s.substr(at + 1);
        if (text.substr(word, pos - word) == whole) cut = word + at;
      }
      for (auto [b, e] : {std::pair{start, cut}, std::pair{cut, pos}}) {
        if (b == e) continue;
        out.tokens.push_back({std::string(text.substr(b, e - b)), {b, e}, fn_(text, {b, e})});
      }
    }
    out.total_bits = sum_bits(out.tokens);
    return out;
  }

 private:
  BitsFn fn_;
  std::vector<std::string> split_;
};

}  // namespace narrinfo::testing
