// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "narrinfo/text_util.hpp"

namespace narrinfo {

/// One model token and its information content, -log2 P(token | prefix).
struct TokenScore {
  std::string text;
  ByteSpan bytes;
  double info_bits = 0.0;

  friend bool operator==(const TokenScore&, const TokenScore&) = default;
};

/// Token-level scoring of `text`. The begin-of-text token is never part of
/// `tokens`; the remaining tokens tile `text` exactly.
struct ScoredText {
  std::string text;
  std::vector<TokenScore> tokens;
  std::string backend_id;
  double total_bits = 0.0;

  friend bool operator==(const ScoredText&, const ScoredText&) = default;
};

/// Sum in token order.
double sum_bits(std::span<const TokenScore> tokens);

/// Throws TokenCoverageMismatch unless the tokens tile the text with no gaps
/// or overlaps and their texts match the covered bytes.
void check_coverage(const ScoredText& scored);

/// Tokens of `full` that belong to the continuation starting at byte
/// `boundary`: a token belongs to it if its first non-whitespace byte is at or
/// after `boundary`; whitespace-only tokens belong to it if they end after
/// `boundary`. Byte ranges are rebased onto the returned text.
ScoredText restrict_to_continuation(const ScoredText& full,
                                    std::size_t boundary);

void to_json(nlohmann::json& j, const ScoredText& s);
void from_json(const nlohmann::json& j, ScoredText& s);

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct GenerationParams {
  double temperature = 0.0;
  int max_tokens = 4096;
};

enum class BackendKind { remote, ngram };

struct BackendConfig {
  BackendKind kind = BackendKind::ngram;

  // remote
  std::string endpoint_url;  // base, e.g. http://localhost:8000/v1
  std::string model_name;
  std::string api_key_env;   // name of the variable holding the key
  int max_context_tokens = 131072;
  std::chrono::milliseconds request_timeout{std::chrono::seconds(120)};
  int max_parallel_requests = 4;
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff{500};
  int score_max_tokens = 1;

  // ngram
  int ngram_order = 3;
  double ngram_alpha = 1.0;
  std::filesystem::path ngram_training_path;
  std::string ngram_training_text;  // used when no path is given
  std::string ngram_extra_alphabet;

  std::filesystem::path cache_dir;  // empty disables the score cache

  /// Throws Config on violated invariants.
  void validate() const;
};

/// Conditional-probability source. Implementations are safe to share across
/// threads.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string id() const = 0;

  /// Scores every token of `text` conditioned on its prefix.
  virtual ScoredText score(std::string_view text) const = 0;

  /// Scores `continuation` conditioned on `context`. The default scores the
  /// concatenation and keeps the continuation's tokens.
  virtual ScoredText score_continuation(std::string_view context,
                                        std::string_view continuation) const;

  /// Chat completion. The default throws UnsupportedBackend.
  virtual std::string generate(std::span<const ChatMessage> messages,
                               const GenerationParams& params) const;
};

/// Builds the backend described by `cfg`, wrapped in the on-disk score cache
/// when `cfg.cache_dir` is set.
std::unique_ptr<Backend> make_backend(const BackendConfig& cfg);

}  // namespace narrinfo
