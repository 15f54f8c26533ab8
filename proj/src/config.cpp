// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/config.hpp"

#include <array>
#include <cstdlib>

#include "narrinfo/error.hpp"

namespace narrinfo {

namespace {

constexpr std::array<std::string_view, 3> kRoles = {"scorer", "generator", "judge"};

constexpr std::array<std::string_view, 15> kBackendKeys = {
    "kind",          "endpoint_url",        "model_name",        "api_key_env",
    "max_context_tokens", "request_timeout_ms", "max_parallel_requests",
    "max_retries",   "retry_backoff_ms",    "score_max_tokens",  "ngram_order",
    "ngram_alpha",   "ngram_training_path", "ngram_extra_alphabet", "cache_dir"};

constexpr std::array<std::string_view, 3> kGlobalKeys = {"seed", "out_dir", "threads"};

bool looks_secret(std::string_view key) {
  const auto dot = key.rfind('.');
  const auto leaf = dot == std::string_view::npos ? key : key.substr(dot + 1);
  return leaf == "api_key" || leaf == "token" || leaf == "password" || leaf == "secret";
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out(kGlobalKeys.begin(), kGlobalKeys.end());
  for (auto role : kRoles) {
    for (auto k : kBackendKeys) out.push_back(std::string(role) + "." + std::string(k));
  }
  return out;
}

}  // namespace

Settings parse_settings(std::string_view text) {
  Settings out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::Config, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) fail(ErrorKind::Config, "line " + std::to_string(line_no) + ": empty key");
    if (looks_secret(key)) {
      fail(ErrorKind::Config, "'" + std::string(key) +
                                  "': secrets are read from the environment only");
    }
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

std::string env_name(std::string_view key) {
  std::string out = "NARRINFO_";
  for (char c : key) {
    if (c == '.' || c == '-') {
      out += '_';
    } else if (c >= 'a' && c <= 'z') {
      out += static_cast<char>(c - 'a' + 'A');
    } else {
      out += c;
    }
  }
  return out;
}

Settings load_settings(const std::optional<std::filesystem::path>& path,
                       const EnvLookup& env) {
  Settings s = path ? parse_settings(read_file(*path)) : Settings{};
  for (const auto& key : known_keys()) {
    if (auto v = env(env_name(key))) s[key] = *v;
  }
  return s;
}

std::optional<std::string> setting(const Settings& s, std::string_view key) {
  auto it = s.find(key);
  if (it == s.end()) return std::nullopt;
  return it->second;
}

BackendConfig backend_config(const Settings& s, std::string_view prefix) {
  BackendConfig cfg;
  auto get = [&](std::string_view k) { return setting(s, std::string(prefix) + "." + std::string(k)); };
  auto as_int = [&](std::string_view k, int& out) {
    if (auto v = get(k)) out = static_cast<int>(parse_int(*v));
  };
  try {
    if (auto v = get("kind")) {
      if (*v == "remote") {
        cfg.kind = BackendKind::remote;
      } else if (*v == "ngram") {
        cfg.kind = BackendKind::ngram;
      } else {
        fail(ErrorKind::Config, std::string(prefix) + ".kind must be remote or ngram");
      }
    }
    if (auto v = get("endpoint_url")) cfg.endpoint_url = *v;
    if (auto v = get("model_name")) cfg.model_name = *v;
    if (auto v = get("api_key_env")) cfg.api_key_env = *v;
    as_int("max_context_tokens", cfg.max_context_tokens);
    as_int("max_parallel_requests", cfg.max_parallel_requests);
    as_int("max_retries", cfg.max_retries);
    as_int("score_max_tokens", cfg.score_max_tokens);
    as_int("ngram_order", cfg.ngram_order);
    if (auto v = get("request_timeout_ms")) {
      cfg.request_timeout = std::chrono::milliseconds(parse_int(*v));
    }
    if (auto v = get("retry_backoff_ms")) {
      cfg.retry_backoff = std::chrono::milliseconds(parse_int(*v));
    }
    if (auto v = get("ngram_alpha")) cfg.ngram_alpha = parse_double(*v);
    if (auto v = get("ngram_training_path")) cfg.ngram_training_path = *v;
    if (auto v = get("ngram_extra_alphabet")) cfg.ngram_extra_alphabet = *v;
    if (auto v = get("cache_dir")) cfg.cache_dir = *v;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    fail(ErrorKind::Config, std::string(prefix) + ": " + e.what());
  }
  return cfg;
}

}  // namespace narrinfo
