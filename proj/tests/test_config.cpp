// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "narrinfo/config.hpp"
#include "narrinfo/error.hpp"
#include "paths.hpp"

namespace narrinfo {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

EnvLookup fake_env(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](const std::string& name) -> std::optional<std::string> {
    auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

TEST(Config, ParsesKeyValueLines) {
  const auto s = parse_settings("# comment\nseed = 7\n\n  scorer.kind=remote  \nout_dir = a b\n");
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(setting(s, "seed"), "7");
  EXPECT_EQ(setting(s, "scorer.kind"), "remote");
  EXPECT_EQ(setting(s, "out_dir"), "a b");
  EXPECT_FALSE(setting(s, "threads"));
}

TEST(Config, RejectsMalformedAndSecrets) {
  EXPECT_EQ(kind_of([] { parse_settings("just words"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { parse_settings(" = 3"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { parse_settings("scorer.api_key = sk-123"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { parse_settings("judge.token = x"); }), ErrorKind::Config);
  EXPECT_NO_THROW(parse_settings("scorer.api_key_env = MY_KEY"));
}

TEST(Config, EnvironmentOverridesFile) {
  EXPECT_EQ(env_name("scorer.endpoint_url"), "NARRINFO_SCORER_ENDPOINT_URL");
  testing::TempDir dir;
  write_file_atomic(dir.path() / "n.conf", "seed = 1\nscorer.model_name = a\n");
  const auto s = load_settings(dir.path() / "n.conf",
                               fake_env({{"NARRINFO_SEED", "99"},
                                         {"NARRINFO_GENERATOR_MAX_RETRIES", "5"}}));
  EXPECT_EQ(setting(s, "seed"), "99");
  EXPECT_EQ(setting(s, "scorer.model_name"), "a");
  EXPECT_EQ(setting(s, "generator.max_retries"), "5");
  EXPECT_EQ(load_settings(std::nullopt, fake_env({})).size(), 0u);
}

TEST(Config, BackendConfigFromSettings) {
  const auto s = parse_settings(
      "scorer.kind = remote\n"
      "scorer.endpoint_url = http://localhost:8000/v1\n"
      "scorer.model_name = llama\n"
      "scorer.max_parallel_requests = 8\n"
      "scorer.request_timeout_ms = 2500\n"
      "judge.ngram_alpha = 0.5\n");
  const auto cfg = backend_config(s, "scorer");
  EXPECT_EQ(cfg.kind, BackendKind::remote);
  EXPECT_EQ(cfg.endpoint_url, "http://localhost:8000/v1");
  EXPECT_EQ(cfg.model_name, "llama");
  EXPECT_EQ(cfg.max_parallel_requests, 8);
  EXPECT_EQ(cfg.request_timeout, std::chrono::milliseconds(2500));
  EXPECT_EQ(backend_config(s, "judge").ngram_alpha, 0.5);
  EXPECT_EQ(backend_config(s, "generator").kind, BackendKind::ngram);
  EXPECT_EQ(kind_of([] { backend_config(parse_settings("scorer.kind = gpu"), "scorer"); }),
            ErrorKind::Config);
  EXPECT_EQ(kind_of([] { backend_config(parse_settings("scorer.max_retries = many"), "scorer"); }),
            ErrorKind::Config);
}

}  // namespace
}  // namespace narrinfo
