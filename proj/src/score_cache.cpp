// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/score_cache.hpp"

#include "narrinfo/error.hpp"

namespace narrinfo {

namespace {

std::string safe_component(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

}  // namespace

CachingBackend::CachingBackend(std::unique_ptr<Backend> inner,
                               std::filesystem::path root)
    : inner_(std::move(inner)), dir_(std::move(root) / safe_component(inner_->id())) {}

std::filesystem::path CachingBackend::entry_path(std::string_view text) const {
  return dir_ / (sha256_hex(text) + ".json");
}

ScoredText CachingBackend::score(std::string_view text) const {
  const std::string key = sha256_hex(text);
  const auto path = dir_ / (key + ".json");
  std::lock_guard lock(stripes_[std::stoul(key.substr(0, 2), nullptr, 16) % stripes_.size()]);
  if (std::filesystem::exists(path)) {
    try {
      auto cached = nlohmann::json::parse(read_file(path)).get<ScoredText>();
      if (cached.text == text && cached.backend_id == inner_->id()) return cached;
    } catch (const nlohmann::json::exception&) {
      // unreadable entry; rescore and overwrite
    }
  }
  ScoredText scored = inner_->score(text);
  write_file_atomic(path, nlohmann::json(scored).dump());
  return scored;
}

std::string CachingBackend::generate(std::span<const ChatMessage> messages,
                                     const GenerationParams& params) const {
  return inner_->generate(messages, params);
}

}  // namespace narrinfo
