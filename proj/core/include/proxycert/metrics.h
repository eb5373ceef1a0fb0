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

// Empirical group fairness metrics over a finite dataset. Every expectation
// is a uniform average over all rows; group membership enters as an
// indicator inside the expectation, so an empty group contributes zero.

#ifndef PROXYCERT_METRICS_H_
#define PROXYCERT_METRICS_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "proxycert/dataset.h"

namespace proxycert {

enum class GroupSide { kTrue, kProxy };

// (1/n) * sum_i (y_i - f_i)^2.
double Mse(std::span<const double> predictions,
           std::span<const std::uint8_t> labels);
double Mse(const LabeledDataset& ds);

// Fraction of rows where the two masks disagree.
double ProxyError(std::span<const std::uint8_t> true_mask,
                  std::span<const std::uint8_t> proxy_mask);

// |(1/n) * sum_i mask_i * (f_i - y_i)|.
double GroupAe(std::span<const double> predictions,
               std::span<const std::uint8_t> labels,
               std::span<const std::uint8_t> mask);
double GroupAe(const LabeledDataset& ds, std::span<const std::uint8_t> mask);

// sum_v P[f = v] * |E[mask * (f - y) | f = v]|, with level sets keyed on
// exact prediction values.
double GroupEce(std::span<const double> predictions,
                std::span<const std::uint8_t> labels,
                std::span<const std::uint8_t> mask);
double GroupEce(const LabeledDataset& ds, std::span<const std::uint8_t> mask);

struct GroupViolation {
  double ae = 0.0;
  double ece = 0.0;
  bool operator==(const GroupViolation&) const = default;
};

// Measured violations of one predictor over one side of a group system.
struct ViolationReport {
  std::map<std::string, GroupViolation> per_group;
  double ae_max = 0.0;
  double ece_max = 0.0;
  double mse = 0.0;
  bool operator==(const ViolationReport&) const = default;
};

struct MaxViolations {
  double ae_max = 0.0;
  double ece_max = 0.0;
};

// Mask for `name` on the requested side; throws DomainError naming the group
// when the dataset does not carry it.
const Mask& GroupMask(const LabeledDataset& ds, const std::string& name,
                      GroupSide side);

MaxViolations ComputeMaxViolations(const LabeledDataset& ds,
                                   const GroupSystem& groups, GroupSide side);

ViolationReport MeasureViolations(const LabeledDataset& ds,
                                  const GroupSystem& groups, GroupSide side);

}  // namespace proxycert

#endif  // PROXYCERT_METRICS_H_
