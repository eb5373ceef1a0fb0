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

// Dataset schema read from a key-value config file.
//
//   # comment
//   label: <column>
//   prediction: <column>            (optional; a baseline is trained if absent)
//   features: <column>, <column>, ...
//   group.<name>.proxy: <predicate>  (required for every group)
//   group.<name>.true: <predicate>   (optional)
//   group.<name>.error: <real in [0,1]>
//
// Keys and values are separated by the first ':'. Group names are runs of
// [A-Za-z0-9_-]. See predicate.h for the predicate grammar.

#ifndef PROXYCERT_SCHEMA_H_
#define PROXYCERT_SCHEMA_H_

#include <optional>
#include <string>
#include <vector>

#include "proxycert/predicate.h"

namespace proxycert {

struct GroupDef {
  std::string name;
  Predicate proxy;
  std::optional<Predicate> truth;
  std::optional<double> proxy_error;
  bool operator==(const GroupDef&) const = default;
};

struct DatasetSchema {
  std::string label_column;
  std::optional<std::string> prediction_column;
  std::vector<std::string> feature_columns;
  std::vector<GroupDef> groups;

  // Throws DomainError with the line number on malformed input.
  static DatasetSchema Parse(const std::string& text);
  static DatasetSchema ParseFile(const std::string& path);
  std::string ToString() const;

  bool operator==(const DatasetSchema&) const = default;
};

}  // namespace proxycert

#endif  // PROXYCERT_SCHEMA_H_
