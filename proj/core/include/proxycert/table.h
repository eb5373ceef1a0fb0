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

#ifndef PROXYCERT_TABLE_H_
#define PROXYCERT_TABLE_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace proxycert {

enum class DataErrorKind {
  kIo,
  kParse,
  kMissingColumn,
  kNonBinaryLabel,
  kPredicateColumn,
  kOutOfRange,
};

// Input-file problems. The message names the offending row and/or column.
class DataError : public std::runtime_error {
 public:
  DataError(DataErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  DataErrorKind kind() const { return kind_; }

 private:
  DataErrorKind kind_;
};

// Numeric column-major table with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t row_count() const {
    return columns.empty() ? 0 : columns.front().size();
  }
  std::optional<std::size_t> ColumnIndex(std::string_view name) const;
  // Throws DataError(kMissingColumn) when absent.
  const std::vector<double>& Column(std::string_view name) const;
  void AddColumn(std::string name, std::vector<double> values);
};

// Comma-separated, header row required, every cell numeric. Surrounding
// whitespace and double quotes on header names are stripped. Row numbers in
// errors are 1-based file lines.
Table ReadCsv(std::istream& in);
Table ReadCsvFile(const std::string& path);

// Values are written with round-trip precision.
void WriteCsv(std::ostream& out, const Table& table);
void WriteCsvFile(const std::string& path, const Table& table);

}  // namespace proxycert

#endif  // PROXYCERT_TABLE_H_
