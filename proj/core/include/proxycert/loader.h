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

#ifndef PROXYCERT_LOADER_H_
#define PROXYCERT_LOADER_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "proxycert/baseline.h"
#include "proxycert/dataset.h"
#include "proxycert/schema.h"
#include "proxycert/table.h"

namespace proxycert {

enum class ErrorSource { kDeclared, kMeasured };

struct LoadedData {
  LabeledDataset dataset;
  GroupSystem groups;
  std::map<std::string, ErrorSource> error_sources;
  std::vector<std::string> feature_names;
  FeatureMatrix features;
  // False when the schema names no prediction column; predictions are then
  // zero-filled until a baseline is trained.
  bool has_predictions = false;
};

// Evaluates group predicates and validates labels and predictions. A declared
// proxy error is used as given; otherwise it is measured from the paired true
// mask when one exists. Throws DataError naming the row or column.
LoadedData LoadTable(const Table& table, const DatasetSchema& schema);
LoadedData LoadCsv(const std::string& path, const DatasetSchema& schema);

// Table plus schema that reload to an identical LoadedData. Masks become
// columns named true_<group> and proxy_<group>.
std::pair<Table, DatasetSchema> SerializeLoaded(const LoadedData& data);

}  // namespace proxycert

#endif  // PROXYCERT_LOADER_H_
