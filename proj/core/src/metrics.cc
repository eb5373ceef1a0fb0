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

#include "proxycert/metrics.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include "proxycert/error.h"

namespace proxycert {
namespace {

void CheckLengths(std::size_t predictions, std::size_t labels,
                  std::size_t mask) {
  if (predictions != labels || predictions != mask) {
    std::ostringstream msg;
    msg << "length mismatch: " << predictions << " predictions, " << labels
        << " labels, " << mask << " mask entries";
    throw DomainError(msg.str());
  }
  if (predictions == 0) throw DomainError("dataset is empty");
}

}  // namespace

double Mse(std::span<const double> predictions,
           std::span<const std::uint8_t> labels) {
  CheckLengths(predictions.size(), labels.size(), labels.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double r = static_cast<double>(labels[i]) - predictions[i];
    sum += r * r;
  }
  return sum / static_cast<double>(predictions.size());
}

double Mse(const LabeledDataset& ds) { return Mse(ds.predictions, ds.labels); }

double ProxyError(std::span<const std::uint8_t> true_mask,
                  std::span<const std::uint8_t> proxy_mask) {
  if (true_mask.size() != proxy_mask.size()) {
    throw DomainError("true and proxy masks differ in length");
  }
  if (true_mask.empty()) throw DomainError("masks are empty");
  std::size_t disagree = 0;
  for (std::size_t i = 0; i < true_mask.size(); ++i) {
    disagree += (true_mask[i] != 0) != (proxy_mask[i] != 0);
  }
  return static_cast<double>(disagree) / static_cast<double>(true_mask.size());
}

double GroupAe(std::span<const double> predictions,
               std::span<const std::uint8_t> labels,
               std::span<const std::uint8_t> mask) {
  CheckLengths(predictions.size(), labels.size(), mask.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (mask[i]) sum += predictions[i] - static_cast<double>(labels[i]);
  }
  return std::abs(sum / static_cast<double>(predictions.size()));
}

double GroupAe(const LabeledDataset& ds, std::span<const std::uint8_t> mask) {
  return GroupAe(ds.predictions, ds.labels, mask);
}

double GroupEce(std::span<const double> predictions,
                std::span<const std::uint8_t> labels,
                std::span<const std::uint8_t> mask) {
  CheckLengths(predictions.size(), labels.size(), mask.size());
  const std::size_t n = predictions.size();
  // sum_v P[f=v] * |E[mask (f-y) | f=v]| = (1/n) sum_v |sum_{i: f_i=v} mask_i (f_i - y_i)|
  // Cells accumulate in row order and are totalled in level order.
  std::unordered_map<double, double> cells;
  for (std::size_t i = 0; i < n; ++i) {
    double& cell = cells[predictions[i]];
    if (mask[i]) cell += predictions[i] - static_cast<double>(labels[i]);
  }
  std::vector<std::pair<double, double>> levels(cells.begin(), cells.end());
  std::sort(levels.begin(), levels.end());
  double total = 0.0;
  for (const auto& [level, cell] : levels) total += std::abs(cell);
  return total / static_cast<double>(n);
}

double GroupEce(const LabeledDataset& ds, std::span<const std::uint8_t> mask) {
  return GroupEce(ds.predictions, ds.labels, mask);
}

const Mask& GroupMask(const LabeledDataset& ds, const std::string& name,
                      GroupSide side) {
  const auto& masks =
      side == GroupSide::kTrue ? ds.true_groups : ds.proxy_groups;
  auto it = masks.find(name);
  if (it == masks.end()) {
    throw DomainError(std::string("dataset has no ") +
                      (side == GroupSide::kTrue ? "true" : "proxy") +
                      " mask for group '" + name + "'");
  }
  return it->second;
}

MaxViolations ComputeMaxViolations(const LabeledDataset& ds,
                                   const GroupSystem& groups, GroupSide side) {
  const ViolationReport report = MeasureViolations(ds, groups, side);
  return {report.ae_max, report.ece_max};
}

ViolationReport MeasureViolations(const LabeledDataset& ds,
                                  const GroupSystem& groups, GroupSide side) {
  ViolationReport report;
  report.mse = Mse(ds);
  for (const GroupEntry& entry : groups.entries()) {
    const Mask& mask = GroupMask(ds, entry.name, side);
    GroupViolation v{GroupAe(ds, mask), GroupEce(ds, mask)};
    report.ae_max = std::max(report.ae_max, v.ae);
    report.ece_max = std::max(report.ece_max, v.ece);
    report.per_group.emplace(entry.name, v);
  }
  return report;
}

}  // namespace proxycert
