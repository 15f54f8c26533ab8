// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <mutex>

#include "narrinfo/lm_backend.hpp"

namespace narrinfo {

/// Disk cache for scored texts, laid out as
/// `<root>/<backend_id>/<sha256(text)>.json`. Generation passes through.
class CachingBackend final : public Backend {
 public:
  CachingBackend(std::unique_ptr<Backend> inner, std::filesystem::path root);

  std::string id() const override { return inner_->id(); }
  ScoredText score(std::string_view text) const override;
  std::string generate(std::span<const ChatMessage> messages,
                       const GenerationParams& params) const override;

  std::filesystem::path entry_path(std::string_view text) const;

 private:
  std::unique_ptr<Backend> inner_;
  std::filesystem::path dir_;
  // Writers to the same key serialise on one stripe.
  mutable std::array<std::mutex, 64> stripes_;
};

}  // namespace narrinfo
