// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <semaphore>
#include <string>

#include <json.hpp>

#include "narrinfo/lm_backend.hpp"

namespace narrinfo {

/// Client for an OpenAI-compatible inference server.
///
/// Scoring posts the text as a raw completions prompt (no chat template)
///
///   {"model", "prompt", "max_tokens": score_max_tokens, "echo": true,
///    "logprobs": 1, "temperature": 0}
///
/// and reads `choices[0].logprobs.{tokens, token_logprobs}`. The leading
/// begin-of-text token carries a null logprob and is dropped; tokens generated
/// past the end of the prompt are ignored. Generation uses
/// `/chat/completions`.
///
/// Transient failures (connection errors, 408, 429, 5xx) are retried with
/// exponential backoff. At most `max_parallel_requests` requests are in
/// flight across all callers.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(BackendConfig cfg);

  std::string id() const override { return id_; }
  ScoredText score(std::string_view text) const override;
  std::string generate(std::span<const ChatMessage> messages,
                       const GenerationParams& params) const override;

 private:
  nlohmann::json post(const std::string& route, const nlohmann::json& body) const;

  BackendConfig cfg_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // e.g. /v1
  std::string id_;
  mutable std::counting_semaphore<> in_flight_;
};

/// Converts a completions response with echoed prompt logprobs into a
/// ScoredText for `text`. Exposed for wire-format tests.
ScoredText parse_completion_logprobs(std::string_view text,
                                     const nlohmann::json& response,
                                     const std::string& backend_id,
                                     int max_context_tokens);

}  // namespace narrinfo
