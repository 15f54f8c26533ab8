// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/csv.hpp"

#include "narrinfo/error.hpp"
#include "narrinfo/text_util.hpp"

namespace narrinfo::csv {

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column(std::string_view name) const {
  if (auto idx = find_column(name)) return *idx;
  fail(ErrorKind::MissingColumn, "missing column '" + std::string(name) + "'");
}

namespace {

std::vector<Row> parse_records(std::string_view s) {
  std::vector<Row> records;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    // A lone empty field is a blank line, not a record.
    if (!(row.size() == 1 && row[0].empty())) records.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          fail(ErrorKind::CsvParse,
               "unexpected quote inside unquoted field on line " +
                   std::to_string(line));
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        if (field_was_quoted) {
          fail(ErrorKind::CsvParse,
               "text after closing quote on line " + std::to_string(line));
        }
        field.push_back(c);
    }
  }
  if (in_quotes) fail(ErrorKind::CsvParse, "unterminated quoted field");
  if (!field.empty() || field_was_quoted || !row.empty()) end_record();
  return records;
}

bool needs_quotes(std::string_view f) {
  if (f.empty()) return false;
  if (is_space(f.front()) || is_space(f.back())) return true;
  return f.find_first_of(",\"\r\n") != std::string_view::npos;
}

}  // namespace

Table parse(std::string_view content) {
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
  auto records = parse_records(content);
  if (records.empty()) fail(ErrorKind::CsvParse, "no header row");
  Table table;
  table.header = std::move(records.front());
  for (auto& h : table.header) h = std::string(trim(h));
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      fail(ErrorKind::CsvParse, "record " + std::to_string(r) + " has " +
                                    std::to_string(records[r].size()) +
                                    " fields, header has " +
                                    std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

Table read(const std::filesystem::path& path) { return parse(read_file(path)); }

std::string format(const Table& table) {
  std::string out;
  auto emit = [&](const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      const std::string& f = row[i];
      if (needs_quotes(f)) {
        out.push_back('"');
        for (char c : f) {
          if (c == '"') out.push_back('"');
          out.push_back(c);
        }
        out.push_back('"');
      } else {
        out += f;
      }
    }
    out += "\r\n";
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out;
}

void write(const std::filesystem::path& path, const Table& table) {
  write_file_atomic(path, format(table));
}

}  // namespace narrinfo::csv
