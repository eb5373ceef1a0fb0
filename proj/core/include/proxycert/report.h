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

// Run reports: a hierarchical JSON document per run, a flat per-group table
// per stage for external plotting, and the boosting patch log.
//
// Group table columns, in order:
//   name,proxy_error,f_term,ae,ece,ae_bound,ece_bound,true_ae,true_ece
// where ae/ece are proxy-side violations and the true_* columns are empty when
// the dataset carries no true masks. Rows are sorted by group name. The
// maximum of `ece` is ECE^max over proxies and the maximum of `ece_bound` is
// the certificate gamma.

#ifndef PROXYCERT_REPORT_H_
#define PROXYCERT_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "proxycert/bounds.h"
#include "proxycert/mc_boosting.h"
#include "proxycert/metrics.h"

namespace proxycert {

struct StageReport {
  std::size_t rows = 0;
  ViolationReport proxy;
  BoundCertificate certificate;
  // Present only when the dataset carries true masks.
  std::optional<ViolationReport> truth;
  std::map<std::string, double> measured_proxy_error;
  bool truth_within_bounds = true;
  bool operator==(const StageReport&) const = default;
};

struct AdjustSummary {
  std::string method;  // "ma" or "mc"
  std::size_t adjust_rows = 0;
  bool applied = false;  // false when the input needed no adjustment
  // Multiaccuracy regression.
  std::map<std::string, double> lambdas;
  bool clipped = false;
  bool rank_deficient = false;
  // Multicalibration boosting.
  double alpha = 0.0;
  int grid_m = 0;
  int rounds = 0;
  double initial_guard = 0.0;
  double final_guard = 0.0;
  bool stopped_without_progress = false;
  bool operator==(const AdjustSummary&) const = default;
};

struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  StageReport before;
  std::optional<StageReport> after;
  std::optional<PremiseCheck> premises;
  // 100 * (gamma_before - gamma_after) / gamma_before, and the beta analogue.
  std::optional<double> reduction_pct;
  std::optional<double> beta_reduction_pct;
  std::optional<AdjustSummary> adjustment;
  std::vector<std::string> notes;
  bool operator==(const RunReport&) const = default;
};

// Round-trips exactly through ParseRunReport.
std::string RunReportToJson(const RunReport& report);
RunReport ParseRunReport(const std::string& json_text);

struct GroupTableRow {
  std::string name;
  double proxy_error = 0.0;
  double f_term = 0.0;
  double ae = 0.0;
  double ece = 0.0;
  double ae_bound = 0.0;
  double ece_bound = 0.0;
  std::optional<double> true_ae;
  std::optional<double> true_ece;
  bool operator==(const GroupTableRow&) const = default;
};

std::vector<GroupTableRow> GroupTable(const StageReport& stage);
void WriteGroupTable(std::ostream& out, const std::vector<GroupTableRow>& rows);
std::vector<GroupTableRow> ReadGroupTable(std::istream& in);

// Writes report.json, groups_before.csv, groups_after.csv (when adjusted) and
// patches.jsonl (when a patch log is given) into `dir`, creating it.
void WriteRunFiles(const std::string& dir, const RunReport& report,
                   const std::vector<PatchLogEntry>* patch_log = nullptr);

// Human-readable multi-line summary for the terminal.
std::string SummarizeRun(const RunReport& report);

}  // namespace proxycert

#endif  // PROXYCERT_REPORT_H_
