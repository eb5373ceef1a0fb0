/*
 * Copyright 2026 The proxycert Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "proxycert/table.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace proxycert {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      break;
    }
    out.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::string Unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

}  // namespace

std::optional<std::size_t> Table::ColumnIndex(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

const std::vector<double>& Table::Column(std::string_view name) const {
  const auto idx = ColumnIndex(name);
  if (!idx) {
    throw DataError(DataErrorKind::kMissingColumn,
                    "missing column '" + std::string(name) + "'");
  }
  return columns[*idx];
}

void Table::AddColumn(std::string name, std::vector<double> values) {
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

Table ReadCsv(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) break;
  }
  if (Trim(line).empty()) {
    throw DataError(DataErrorKind::kParse, "CSV input has no header row");
  }
  // Tolerate a UTF-8 byte-order mark.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  for (std::string_view name : SplitCommas(line)) {
    std::string col = Unquote(name);
    if (col.empty()) {
      throw DataError(DataErrorKind::kParse,
                      "empty column name in header (line " +
                          std::to_string(line_no) + ")");
    }
    if (table.ColumnIndex(col)) {
      throw DataError(DataErrorKind::kParse, "duplicate column '" + col + "'");
    }
    table.header.push_back(std::move(col));
  }
  table.columns.resize(table.header.size());

  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCommas(line);
    if (cells.size() != table.header.size()) {
      throw DataError(DataErrorKind::kParse,
                      "line " + std::to_string(line_no) + " has " +
                          std::to_string(cells.size()) + " fields, expected " +
                          std::to_string(table.header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = Unquote(cells[c]);
      double value = 0.0;
      const char* b = cell.data();
      const char* e = b + cell.size();
      auto [ptr, ec] = std::from_chars(b, e, value);
      if (cell.empty() || ec != std::errc() || ptr != e) {
        throw DataError(DataErrorKind::kParse,
                        "line " + std::to_string(line_no) + ", column '" +
                            table.header[c] + "': '" + cell +
                            "' is not a number");
      }
      table.columns[c].push_back(value);
    }
  }
  return table;
}

Table ReadCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(DataErrorKind::kIo, "cannot open '" + path + "'");
  return ReadCsv(in);
}

void WriteCsv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out << ',';
    out << table.header[c];
  }
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", table.columns[c][r]);
      out << buf;
    }
    out << '\n';
  }
}

void WriteCsvFile(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw DataError(DataErrorKind::kIo, "cannot write '" + path + "'");
  WriteCsv(out, table);
}

}  // namespace proxycert
