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

// Worst-case certificates for true-group violations computed from proxy
// groups and their error rates alone.

#ifndef PROXYCERT_BOUNDS_H_
#define PROXYCERT_BOUNDS_H_

#include <map>
#include <string>

#include "proxycert/dataset.h"
#include "proxycert/metrics.h"

namespace proxycert {

// Slack between true and proxy violations: min(err, sqrt(mse * err)).
// The square-root branch is active exactly when mse < err.
double FTerm(double mse, double err);

struct GroupBound {
  double proxy_error = 0.0;
  double f_term = 0.0;
  double proxy_ae = 0.0;
  double proxy_ece = 0.0;
  double ae_bound = 0.0;   // f_term + proxy_ae
  double ece_bound = 0.0;  // f_term + proxy_ece
  bool operator==(const GroupBound&) const = default;
};

struct BoundCertificate {
  std::map<std::string, GroupBound> per_group;
  double beta = 0.0;   // max ae_bound: the predictor is (G, beta)-multiaccurate
  double gamma = 0.0;  // max ece_bound: the predictor is (G, gamma)-multicalibrated
  double mse_used = 0.0;
  bool operator==(const BoundCertificate&) const = default;
};

// Certifies `ds` against `groups` using proxy masks and the declared proxy
// errors. True-group masks are never read. Throws DomainError when a group
// lacks a proxy mask or a declared error, or when the dataset is empty.
BoundCertificate Certify(const LabeledDataset& ds, const GroupSystem& groups);

// Same certificate built from an already measured proxy-side report.
BoundCertificate CertifyFromReport(const ViolationReport& proxy_report,
                                   const GroupSystem& groups);

// Conditions under which a post-processed predictor provably has a smaller
// certificate than the original. Strict inequalities use exact comparison,
// so ties do not hold.
struct PremiseCheck {
  double mse_before = 0.0;
  double mse_after = 0.0;
  double min_ae_before = 0.0;
  double min_ece_before = 0.0;
  double ae_max_after = 0.0;
  double ece_max_after = 0.0;
  bool mse_non_increasing = false;  // mse_after <= mse_before
  bool ae_strict = false;           // ae_max_after < min_ae_before
  bool ece_strict = false;          // ece_max_after < min_ece_before
  bool ma_hold = false;             // gamma analogue for beta
  bool mc_hold = false;             // gamma(after) <= gamma(before) follows
  bool operator==(const PremiseCheck&) const = default;
};

// Both reports must be proxy-side and cover the same group names; throws
// DomainError otherwise.
PremiseCheck CheckReductionPremises(const ViolationReport& before,
                                    const ViolationReport& after);

}  // namespace proxycert

#endif  // PROXYCERT_BOUNDS_H_
