// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/lm_backend.hpp"

#include "narrinfo/error.hpp"
#include "narrinfo/ngram.hpp"
#include "narrinfo/remote_backend.hpp"
#include "narrinfo/score_cache.hpp"

namespace narrinfo {

double sum_bits(std::span<const TokenScore> tokens) {
  double total = 0.0;
  for (const auto& t : tokens) total += t.info_bits;
  return total;
}

void check_coverage(const ScoredText& scored) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < scored.tokens.size(); ++i) {
    const auto& tok = scored.tokens[i];
    if (tok.bytes.begin != pos || tok.bytes.end < tok.bytes.begin ||
        tok.bytes.end > scored.text.size() ||
        scored.text.compare(tok.bytes.begin, tok.bytes.size(), tok.text) != 0 ||
        tok.text.size() != tok.bytes.size()) {
      fail(ErrorKind::TokenCoverageMismatch,
           "token " + std::to_string(i) + " does not continue at byte " +
               std::to_string(pos));
    }
    pos = tok.bytes.end;
  }
  if (pos != scored.text.size()) {
    fail(ErrorKind::TokenCoverageMismatch,
         "tokens cover " + std::to_string(pos) + " of " +
             std::to_string(scored.text.size()) + " bytes");
  }
}

namespace {

bool belongs_to_continuation(const std::string& text, const TokenScore& tok,
                             std::size_t boundary) {
  for (std::size_t b = tok.bytes.begin; b < tok.bytes.end; ++b) {
    if (!is_space(text[b])) return b >= boundary;
  }
  return tok.bytes.end > boundary;
}

}  // namespace

ScoredText restrict_to_continuation(const ScoredText& full,
                                    std::size_t boundary) {
  ScoredText out;
  out.backend_id = full.backend_id;
  std::size_t first = full.tokens.size();
  for (std::size_t i = 0; i < full.tokens.size(); ++i) {
    if (belongs_to_continuation(full.text, full.tokens[i], boundary)) {
      first = i;
      break;
    }
  }
  if (first == full.tokens.size()) return out;
  const std::size_t base = full.tokens[first].bytes.begin;
  out.text = full.text.substr(base);
  out.tokens.reserve(full.tokens.size() - first);
  for (std::size_t i = first; i < full.tokens.size(); ++i) {
    TokenScore t = full.tokens[i];
    t.bytes = {t.bytes.begin - base, t.bytes.end - base};
    out.tokens.push_back(std::move(t));
  }
  out.total_bits = sum_bits(out.tokens);
  return out;
}

void to_json(nlohmann::json& j, const ScoredText& s) {
  auto tokens = nlohmann::json::array();
  for (const auto& t : s.tokens) {
    tokens.push_back({{"text", t.text},
                      {"begin", t.bytes.begin},
                      {"end", t.bytes.end},
                      {"bits", t.info_bits}});
  }
  j = {{"text", s.text},
       {"backend_id", s.backend_id},
       {"total_bits", s.total_bits},
       {"tokens", std::move(tokens)}};
}

void from_json(const nlohmann::json& j, ScoredText& s) {
  s.text = j.at("text").get<std::string>();
  s.backend_id = j.at("backend_id").get<std::string>();
  s.total_bits = j.at("total_bits").get<double>();
  s.tokens.clear();
  for (const auto& t : j.at("tokens")) {
    s.tokens.push_back({t.at("text").get<std::string>(),
                        {t.at("begin").get<std::size_t>(),
                         t.at("end").get<std::size_t>()},
                        t.at("bits").get<double>()});
  }
}

void BackendConfig::validate() const {
  if (max_parallel_requests < 1) {
    fail(ErrorKind::Config, "max_parallel_requests must be >= 1");
  }
  if (kind == BackendKind::remote) {
    if (endpoint_url.empty()) fail(ErrorKind::Config, "remote backend needs endpoint_url");
    if (model_name.empty()) fail(ErrorKind::Config, "remote backend needs model_name");
    if (max_context_tokens < 1) fail(ErrorKind::Config, "max_context_tokens must be >= 1");
    if (max_retries < 0) fail(ErrorKind::Config, "max_retries must be >= 0");
  } else {
    if (ngram_order < 1) fail(ErrorKind::Config, "ngram order must be >= 1");
    if (!(ngram_alpha > 0.0)) fail(ErrorKind::Config, "ngram alpha must be > 0");
  }
}

ScoredText Backend::score_continuation(std::string_view context,
                                       std::string_view continuation) const {
  if (continuation.empty()) {
    fail(ErrorKind::InvalidArgument, "continuation must be non-empty");
  }
  std::string full;
  full.reserve(context.size() + continuation.size());
  full.append(context);
  full.append(continuation);
  return restrict_to_continuation(score(full), context.size());
}

std::string Backend::generate(std::span<const ChatMessage>,
                              const GenerationParams&) const {
  fail(ErrorKind::UnsupportedBackend,
       "backend '" + id() + "' cannot generate chat completions");
}

std::unique_ptr<Backend> make_backend(const BackendConfig& cfg) {
  cfg.validate();
  std::unique_ptr<Backend> backend;
  if (cfg.kind == BackendKind::ngram) {
    std::string training = cfg.ngram_training_path.empty()
                               ? cfg.ngram_training_text
                               : read_file(cfg.ngram_training_path);
    backend = std::make_unique<NgramBackend>(NgramModel::train(
        training, cfg.ngram_order, cfg.ngram_alpha, cfg.ngram_extra_alphabet));
  } else {
    backend = std::make_unique<RemoteBackend>(cfg);
  }
  if (!cfg.cache_dir.empty()) {
    backend = std::make_unique<CachingBackend>(std::move(backend), cfg.cache_dir);
  }
  return backend;
}

}  // namespace narrinfo
