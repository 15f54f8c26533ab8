// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/remote_backend.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <thread>

#include "narrinfo/error.hpp"

namespace narrinfo {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string excerpt(std::string_view body) {
  constexpr std::size_t kMax = 300;
  return std::string(body.substr(0, kMax)) + (body.size() > kMax ? "..." : "");
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Some servers render byte-fallback tokens as "bytes:\xe2\x80".
std::string decode_token_text(const std::string& token) {
  constexpr std::string_view kPrefix = "bytes:";
  if (token.rfind(kPrefix, 0) != 0) return token;
  std::string out;
  for (std::size_t i = kPrefix.size(); i < token.size(); ++i) {
    if (token[i] == '\\' && i + 3 < token.size() && token[i + 1] == 'x') {
      const int hi = hex_value(token[i + 2]);
      const int lo = hex_value(token[i + 3]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 3;
        continue;
      }
    }
    out.push_back(token[i]);
  }
  return out;
}

bool is_transient(int status) {
  return status == 408 || status == 429 || (status >= 500 && status <= 599);
}

}  // namespace

ScoredText parse_completion_logprobs(std::string_view text,
                                     const nlohmann::json& response,
                                     const std::string& backend_id,
                                     int max_context_tokens) {
  std::vector<std::string> tokens;
  std::vector<nlohmann::json> logprobs;
  try {
    const auto& lp = response.at("choices").at(0).at("logprobs");
    for (const auto& t : lp.at("tokens")) tokens.push_back(t.get<std::string>());
    for (const auto& v : lp.at("token_logprobs")) logprobs.push_back(v);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::EndpointError,
         std::string("malformed logprobs payload: ") + e.what());
  }
  if (tokens.size() != logprobs.size()) {
    fail(ErrorKind::EndpointError, "tokens and token_logprobs differ in length");
  }

  ScoredText out;
  out.text = std::string(text);
  out.backend_id = backend_id;

  std::size_t i = 0;
  if (!tokens.empty() && logprobs[0].is_null()) {
    const std::string first = decode_token_text(tokens[0]);
    if (!first.empty() && text.substr(0, first.size()) == first &&
        (tokens.size() < 2 || text.substr(first.size()).rfind(
                                  decode_token_text(tokens[1]), 0) == 0)) {
      fail(ErrorKind::TokenCoverageMismatch,
           "first prompt token has no logprob; the endpoint must prepend a "
           "begin-of-text token");
    }
    i = 1;  // begin-of-text
  }

  std::size_t pos = 0;
  for (; i < tokens.size() && pos < text.size(); ++i) {
    const std::string tok = decode_token_text(tokens[i]);
    if (tok.empty() || text.compare(pos, tok.size(), tok) != 0) {
      fail(ErrorKind::TokenCoverageMismatch,
           "token " + std::to_string(i) + " ('" + excerpt(tok) +
               "') does not match the text at byte " + std::to_string(pos));
    }
    if (!logprobs[i].is_number()) {
      fail(ErrorKind::EndpointError, "missing logprob for token " + std::to_string(i));
    }
    const double bits = -logprobs[i].get<double>() / kLn2;
    out.tokens.push_back({tok, {pos, pos + tok.size()}, bits <= 0.0 ? 0.0 : bits});
    pos += tok.size();
  }
  if (pos != text.size()) {
    fail(ErrorKind::TokenCoverageMismatch,
         "echoed tokens cover " + std::to_string(pos) + " of " +
             std::to_string(text.size()) + " bytes");
  }
  if (static_cast<long long>(out.tokens.size()) > max_context_tokens) {
    fail(ErrorKind::ContextOverflow,
         std::to_string(out.tokens.size()) + " tokens exceed the limit of " +
             std::to_string(max_context_tokens));
  }
  out.total_bits = sum_bits(out.tokens);
  return out;
}

RemoteBackend::RemoteBackend(BackendConfig cfg)
    : cfg_(std::move(cfg)), in_flight_(cfg_.max_parallel_requests) {
  cfg_.validate();
  const std::string& url = cfg_.endpoint_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    fail(ErrorKind::Config, "endpoint_url needs a scheme: " + url);
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_begin);
  path_prefix_ = path_begin == std::string::npos ? "" : url.substr(path_begin);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  id_ = cfg_.model_name;
}

nlohmann::json RemoteBackend::post(const std::string& route,
                                   const nlohmann::json& body) const {
  httplib::Headers headers;
  if (!cfg_.api_key_env.empty()) {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      fail(ErrorKind::Config,
           "environment variable " + cfg_.api_key_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string payload = body.dump();
  const std::string path = path_prefix_ + route;

  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{in_flight_};

  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(cfg_.retry_backoff * (1LL << (attempt - 1)));
    }
    httplib::Client client(origin_);
    client.set_connection_timeout(cfg_.request_timeout);
    client.set_read_timeout(cfg_.request_timeout);
    client.set_write_timeout(cfg_.request_timeout);
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception&) {
        fail(ErrorKind::EndpointError, "status 200, unparseable body: " +
                                           excerpt(res->body));
      }
    }
    if (res->status == 400 &&
        (res->body.find("context length") != std::string::npos ||
         res->body.find("context_length") != std::string::npos)) {
      fail(ErrorKind::ContextOverflow, excerpt(res->body));
    }
    last_error = "status " + std::to_string(res->status) + ": " + excerpt(res->body);
    if (!is_transient(res->status)) break;
  }
  fail(ErrorKind::EndpointError, last_error);
}

ScoredText RemoteBackend::score(std::string_view text) const {
  if (text.empty()) fail(ErrorKind::InvalidArgument, "cannot score empty text");
  const nlohmann::json body = {{"model", cfg_.model_name},
                               {"prompt", std::string(text)},
                               {"max_tokens", cfg_.score_max_tokens},
                               {"echo", true},
                               {"logprobs", 1},
                               {"temperature", 0.0}};
  return parse_completion_logprobs(text, post("/completions", body), id_,
                                   cfg_.max_context_tokens);
}

std::string RemoteBackend::generate(std::span<const ChatMessage> messages,
                                    const GenerationParams& params) const {
  if (messages.empty()) fail(ErrorKind::InvalidArgument, "no messages");
  auto msgs = nlohmann::json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  const nlohmann::json body = {{"model", cfg_.model_name},
                               {"messages", std::move(msgs)},
                               {"temperature", params.temperature},
                               {"max_tokens", params.max_tokens}};
  const auto response = post("/chat/completions", body);
  try {
    return response.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::EndpointError,
         std::string("malformed chat completion: ") + e.what());
  }
}

}  // namespace narrinfo
