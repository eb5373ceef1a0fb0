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

#include "proxycert/dataset.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "proxycert/error.h"

namespace proxycert {
namespace {

void CheckMask(const std::string& kind, const std::string& name,
               const Mask& mask, std::size_t n) {
  if (mask.size() != n) {
    std::ostringstream msg;
    msg << kind << " mask '" << name << "' has " << mask.size()
        << " entries, expected " << n;
    throw DomainError(msg.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i] > 1) {
      std::ostringstream msg;
      msg << kind << " mask '" << name << "' row " << i << " is not 0/1";
      throw DomainError(msg.str());
    }
  }
}

Mask SubsetMask(const Mask& mask, std::span<const std::size_t> rows) {
  Mask out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(mask.at(r));
  return out;
}

}  // namespace

void LabeledDataset::Validate(PredictionRange range) const {
  const std::size_t n = row_count();
  if (predictions.size() != n) {
    std::ostringstream msg;
    msg << "dataset has " << predictions.size() << " predictions and " << n
        << " labels";
    throw DomainError(msg.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] > 1) {
      std::ostringstream msg;
      msg << "label at row " << i << " is not 0/1";
      throw DomainError(msg.str());
    }
    const double f = predictions[i];
    if (!std::isfinite(f) ||
        (range == PredictionRange::kUnitInterval && (f < 0.0 || f > 1.0))) {
      std::ostringstream msg;
      msg << "prediction at row " << i << " is " << f
          << (range == PredictionRange::kUnitInterval ? ", outside [0,1]"
                                                      : ", not finite");
      throw DomainError(msg.str());
    }
  }
  for (const auto& [name, mask] : true_groups) CheckMask("true", name, mask, n);
  for (const auto& [name, mask] : proxy_groups) CheckMask("proxy", name, mask, n);
}

LabeledDataset LabeledDataset::WithPredictions(
    std::vector<double> new_predictions) const {
  if (new_predictions.size() != row_count()) {
    throw DomainError("replacement predictions do not match the row count");
  }
  LabeledDataset out = *this;
  out.predictions = std::move(new_predictions);
  return out;
}

LabeledDataset LabeledDataset::Subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.predictions.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    out.predictions.push_back(predictions.at(r));
    out.labels.push_back(labels.at(r));
  }
  for (const auto& [name, mask] : true_groups) {
    out.true_groups.emplace(name, SubsetMask(mask, rows));
  }
  for (const auto& [name, mask] : proxy_groups) {
    out.proxy_groups.emplace(name, SubsetMask(mask, rows));
  }
  return out;
}

GroupSystem::GroupSystem(std::vector<GroupEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const GroupEntry& a, const GroupEntry& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const GroupEntry& e = entries_[i];
    if (e.name.empty()) throw DomainError("group name must not be empty");
    if (i > 0 && entries_[i - 1].name == e.name) {
      throw DomainError("duplicate group name '" + e.name + "'");
    }
    if (e.proxy_error.has_value()) {
      const double err = *e.proxy_error;
      if (!(err >= 0.0 && err <= 1.0)) {
        std::ostringstream msg;
        msg << "proxy error for group '" << e.name << "' is " << err
            << ", outside [0,1]";
        throw DomainError(msg.str());
      }
    }
  }
}

const GroupEntry* GroupSystem::Find(std::string_view name) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), name,
      [](const GroupEntry& e, std::string_view n) { return e.name < n; });
  if (it == entries_.end() || it->name != name) return nullptr;
  return &*it;
}

std::vector<std::string> GroupSystem::Names() const {
  std::vector<std::string> names;
  names.reserve(entries_.size());
  for (const auto& e : entries_) names.push_back(e.name);
  return names;
}

GroupSystem GroupSystem::FromProxyMasks(const LabeledDataset& ds) {
  std::vector<GroupEntry> entries;
  for (const auto& [name, mask] : ds.proxy_groups) {
    entries.push_back({name, ds.true_groups.contains(name), std::nullopt});
  }
  return GroupSystem(std::move(entries));
}

}  // namespace proxycert
