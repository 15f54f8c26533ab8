// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace narrinfo {

/// Half-open byte range [begin, end).
struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(std::size_t pos) const { return pos >= begin && pos < end; }
  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

// ASCII whitespace only; clause separators are always ASCII.
inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

std::string_view trim(std::string_view s);

/// Decodes UTF-8 into codepoints; throws InvalidArgument on malformed input.
std::u32string utf8_decode(std::string_view s);

/// Byte length of each codepoint of a valid UTF-8 string, in order.
std::vector<std::size_t> utf8_char_lengths(std::string_view s);

std::size_t utf8_length(std::string_view s);

std::string utf8_encode(char32_t cp);

std::string sha256_hex(std::string_view data);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

double parse_double(std::string_view s);
long long parse_int(std::string_view s);

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames, so readers never observe
/// a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

}  // namespace narrinfo
