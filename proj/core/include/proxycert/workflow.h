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

// Audit -> adjust -> re-audit workflow shared by the command-line tool and
// the end-to-end tests.

#ifndef PROXYCERT_WORKFLOW_H_
#define PROXYCERT_WORKFLOW_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proxycert/baseline.h"
#include "proxycert/loader.h"
#include "proxycert/ma_regression.h"
#include "proxycert/mc_boosting.h"
#include "proxycert/report.h"

namespace proxycert {

struct SplitFractions {
  double train = 0.6;
  double adjust = 0.3;
  double eval = 0.1;

  // "0.6,0.3,0.1"; throws DomainError unless three non-negative parts sum to
  // 1 within 1e-9.
  static SplitFractions Parse(const std::string& text);
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> adjust;
  std::vector<std::size_t> eval;
};

// Seeded shuffle, then contiguous slices by fraction.
SplitIndices MakeSplit(std::size_t n, const SplitFractions& fractions,
                       std::uint64_t seed);

struct PipelineOptions {
  SplitFractions split;
  std::uint64_t seed = 0;
  BaselineKind baseline = BaselineKind::kStumpEnsemble;
  // Round predictions to multiples of 1/bins before anything else.
  std::optional<int> bins;
};

struct PreparedData {
  LabeledDataset audit;   // rows audited by `audit` / `certify`
  LabeledDataset adjust;  // rows used to fit a post-processor
  LabeledDataset eval;    // rows the fitted post-processor is evaluated on
  GroupSystem groups;
  std::vector<std::string> notes;
};

// When the data has no prediction column a baseline is trained on the train
// split and the audit covers the remaining rows. With supplied predictions
// the audit covers every row and the train share is dropped from the
// adjust / eval split.
PreparedData Prepare(const LoadedData& data, const PipelineOptions& options);

// Proxy-side violations and certificate; with `with_truth`, also the
// true-group violations when masks exist, the measured proxy errors and
// whether the truth sits under each bound.
StageReport EvaluateStage(const LabeledDataset& ds, const GroupSystem& groups,
                          bool with_truth);

RunReport RunAudit(const LabeledDataset& ds, const GroupSystem& groups);
RunReport RunCertify(const LabeledDataset& ds, const GroupSystem& groups);

enum class AdjustMethod { kMa, kMc };

struct AdjustOptions {
  AdjustMethod method = AdjustMethod::kMc;
  double alpha = 0.1;
  bool clip = false;
};

struct AdjustRun {
  RunReport report;
  std::vector<PatchLogEntry> patch_log;
  std::vector<double> eval_predictions;  // adjusted model on the eval rows
};

// Fits the chosen post-processor on the proxy masks of `adjust_rows`, applies
// it to `eval_rows` and reports both stages there. Propagates
// RoundCapExceeded from boosting.
AdjustRun RunAdjust(const LabeledDataset& adjust_rows,
                    const LabeledDataset& eval_rows, const GroupSystem& groups,
                    const AdjustOptions& options);

}  // namespace proxycert

#endif  // PROXYCERT_WORKFLOW_H_
