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

#include "proxycert/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "proxycert/error.h"

namespace proxycert {

double FTerm(double mse, double err) {
  if (!(mse >= 0.0) || !std::isfinite(mse)) {
    throw DomainError("mse must be a finite non-negative number");
  }
  if (!(err >= 0.0 && err <= 1.0)) {
    throw DomainError("proxy error must lie in [0,1]");
  }
  return std::min(err, std::sqrt(mse * err));
}

BoundCertificate CertifyFromReport(const ViolationReport& proxy_report,
                                   const GroupSystem& groups) {
  BoundCertificate cert;
  cert.mse_used = proxy_report.mse;
  for (const GroupEntry& entry : groups.entries()) {
    if (!entry.proxy_error.has_value()) {
      throw DomainError("group '" + entry.name +
                        "' has no declared proxy error; it cannot be certified");
    }
    auto it = proxy_report.per_group.find(entry.name);
    if (it == proxy_report.per_group.end()) {
      throw DomainError("no proxy violation measured for group '" +
                        entry.name + "'");
    }
    GroupBound b;
    b.proxy_error = *entry.proxy_error;
    b.f_term = FTerm(proxy_report.mse, b.proxy_error);
    b.proxy_ae = it->second.ae;
    b.proxy_ece = it->second.ece;
    b.ae_bound = b.f_term + b.proxy_ae;
    b.ece_bound = b.f_term + b.proxy_ece;
    cert.beta = std::max(cert.beta, b.ae_bound);
    cert.gamma = std::max(cert.gamma, b.ece_bound);
    cert.per_group.emplace(entry.name, b);
  }
  return cert;
}

BoundCertificate Certify(const LabeledDataset& ds, const GroupSystem& groups) {
  if (ds.row_count() == 0) throw DomainError("dataset is empty");
  for (const GroupEntry& entry : groups.entries()) {
    if (!entry.proxy_error.has_value()) {
      throw DomainError("group '" + entry.name +
                        "' has no declared proxy error; it cannot be certified");
    }
  }
  return CertifyFromReport(MeasureViolations(ds, groups, GroupSide::kProxy),
                           groups);
}

PremiseCheck CheckReductionPremises(const ViolationReport& before,
                                    const ViolationReport& after) {
  if (before.per_group.size() != after.per_group.size()) {
    throw DomainError("before/after reports cover different group sets");
  }
  if (before.per_group.empty()) {
    throw DomainError("reports contain no groups");
  }
  PremiseCheck check;
  check.min_ae_before = std::numeric_limits<double>::infinity();
  check.min_ece_before = std::numeric_limits<double>::infinity();
  for (const auto& [name, v] : before.per_group) {
    auto it = after.per_group.find(name);
    if (it == after.per_group.end()) {
      throw DomainError("group '" + name + "' missing from the after report");
    }
    check.min_ae_before = std::min(check.min_ae_before, v.ae);
    check.min_ece_before = std::min(check.min_ece_before, v.ece);
    check.ae_max_after = std::max(check.ae_max_after, it->second.ae);
    check.ece_max_after = std::max(check.ece_max_after, it->second.ece);
  }
  check.mse_before = before.mse;
  check.mse_after = after.mse;
  check.mse_non_increasing = after.mse <= before.mse;
  check.ae_strict = check.ae_max_after < check.min_ae_before;
  check.ece_strict = check.ece_max_after < check.min_ece_before;
  check.ma_hold = check.ae_strict && check.mse_non_increasing;
  check.mc_hold = check.ece_strict && check.mse_non_increasing;
  return check;
}

}  // namespace proxycert
