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

#include "proxycert/loader.h"

#include <cmath>
#include <sstream>

#include "proxycert/error.h"
#include "proxycert/metrics.h"

namespace proxycert {

LoadedData LoadTable(const Table& table, const DatasetSchema& schema) {
  LoadedData out;
  const std::size_t n = table.row_count();

  const std::vector<double>& label_col = table.Column(schema.label_column);
  out.dataset.labels.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double v = label_col[r];
    if (v != 0.0 && v != 1.0) {
      std::ostringstream msg;
      msg << "row " << r + 1 << ", column '" << schema.label_column
          << "': label " << v << " is not 0 or 1";
      throw DataError(DataErrorKind::kNonBinaryLabel, msg.str());
    }
    out.dataset.labels.push_back(static_cast<std::uint8_t>(v));
  }

  if (schema.prediction_column) {
    const std::vector<double>& pred = table.Column(*schema.prediction_column);
    for (std::size_t r = 0; r < n; ++r) {
      if (!(pred[r] >= 0.0 && pred[r] <= 1.0)) {
        std::ostringstream msg;
        msg << "row " << r + 1 << ", column '" << *schema.prediction_column
            << "': prediction " << pred[r] << " is outside [0,1]";
        throw DataError(DataErrorKind::kOutOfRange, msg.str());
      }
    }
    out.dataset.predictions = pred;
    out.has_predictions = true;
  } else {
    out.dataset.predictions.assign(n, 0.0);
  }

  out.feature_names = schema.feature_columns;
  out.features.rows = n;
  out.features.cols = schema.feature_columns.size();
  out.features.values.resize(n * out.features.cols);
  for (std::size_t c = 0; c < out.features.cols; ++c) {
    const std::vector<double>& col = table.Column(schema.feature_columns[c]);
    for (std::size_t r = 0; r < n; ++r) {
      out.features.values[r * out.features.cols + c] = col[r];
    }
  }

  std::vector<GroupEntry> entries;
  for (const GroupDef& def : schema.groups) {
    Mask proxy = def.proxy.Evaluate(table);
    GroupEntry entry{def.name, def.truth.has_value(), def.proxy_error};
    if (def.truth) {
      Mask truth = def.truth->Evaluate(table);
      if (!entry.proxy_error && n > 0) {
        entry.proxy_error = ProxyError(truth, proxy);
        out.error_sources[def.name] = ErrorSource::kMeasured;
      }
      out.dataset.true_groups.emplace(def.name, std::move(truth));
    }
    if (def.proxy_error) out.error_sources[def.name] = ErrorSource::kDeclared;
    out.dataset.proxy_groups.emplace(def.name, std::move(proxy));
    entries.push_back(std::move(entry));
  }
  out.groups = GroupSystem(std::move(entries));
  return out;
}

LoadedData LoadCsv(const std::string& path, const DatasetSchema& schema) {
  return LoadTable(ReadCsvFile(path), schema);
}

std::pair<Table, DatasetSchema> SerializeLoaded(const LoadedData& data) {
  Table table;
  DatasetSchema schema;
  const LabeledDataset& ds = data.dataset;
  const std::size_t n = ds.row_count();

  for (std::size_t c = 0; c < data.features.cols; ++c) {
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = data.features.values[r * data.features.cols + c];
    table.AddColumn(data.feature_names.at(c), std::move(col));
  }
  schema.feature_columns = data.feature_names;

  table.AddColumn("label", std::vector<double>(ds.labels.begin(), ds.labels.end()));
  schema.label_column = "label";
  if (data.has_predictions) {
    table.AddColumn("prediction", ds.predictions);
    schema.prediction_column = "prediction";
  }

  auto as_column = [](const Mask& m) {
    return std::vector<double>(m.begin(), m.end());
  };
  for (const GroupEntry& e : data.groups.entries()) {
    GroupDef def;
    def.name = e.name;
    const std::string proxy_col = "proxy_" + e.name;
    table.AddColumn(proxy_col, as_column(ds.proxy_groups.at(e.name)));
    def.proxy = Predicate{{Comparison{proxy_col, CompareOp::kEq, 1.0}}};
    auto t = ds.true_groups.find(e.name);
    if (t != ds.true_groups.end()) {
      const std::string true_col = "true_" + e.name;
      table.AddColumn(true_col, as_column(t->second));
      def.truth = Predicate{{Comparison{true_col, CompareOp::kEq, 1.0}}};
    }
    auto src = data.error_sources.find(e.name);
    const bool measured =
        src != data.error_sources.end() && src->second == ErrorSource::kMeasured;
    if (!measured) def.proxy_error = e.proxy_error;
    schema.groups.push_back(std::move(def));
  }
  return {std::move(table), std::move(schema)};
}

}  // namespace proxycert
