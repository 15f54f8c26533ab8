// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "narrinfo/lm_backend.hpp"

namespace narrinfo {

/// Flat `key = value` settings. Lines starting with '#' are comments.
using Settings = std::map<std::string, std::string, std::less<>>;

Settings parse_settings(std::string_view text);

/// Looks up an environment variable; empty optional when unset.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_env();

/// `scorer.endpoint_url` is overridden by NARRINFO_SCORER_ENDPOINT_URL.
std::string env_name(std::string_view key);

/// Reads the file (if given) and applies environment overrides for every
/// known key. Keys that look like secrets are rejected.
Settings load_settings(const std::optional<std::filesystem::path>& path,
                       const EnvLookup& env = process_env());

/// Backend settings under `prefix.` (scorer, generator or judge).
BackendConfig backend_config(const Settings& s, std::string_view prefix);

std::optional<std::string> setting(const Settings& s, std::string_view key);

}  // namespace narrinfo
