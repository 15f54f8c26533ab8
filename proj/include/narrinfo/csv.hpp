// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace narrinfo::csv {

using Row = std::vector<std::string>;

/// RFC-4180 table with a mandatory header row.
struct Table {
  Row header;
  std::vector<Row> rows;

  /// Throws MissingColumn when absent.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;
};

/// Accepts CRLF or LF line endings, a leading UTF-8 BOM, quoted fields with
/// embedded separators/newlines and doubled quotes. Rows whose width differs
/// from the header raise CsvParse.
Table parse(std::string_view content);
Table read(const std::filesystem::path& path);

/// Serialises with CRLF record terminators, quoting only where needed.
std::string format(const Table& table);
void write(const std::filesystem::path& path, const Table& table);

}  // namespace narrinfo::csv
