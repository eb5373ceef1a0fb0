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

#include "proxycert/workflow.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "proxycert/bounds.h"
#include "proxycert/error.h"
#include "proxycert/group_design.h"
#include "proxycert/metrics.h"

namespace proxycert {
namespace {

// Slack when comparing a measured true violation against its bound, which
// is computed from the same rows with a different summation order.
constexpr double kBoundSlack = 1e-12;

std::vector<std::size_t> Concat(const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<double> Bin(std::vector<double> predictions, int bins) {
  for (double& v : predictions) {
    v = std::floor(v * bins + 0.5) / bins;
  }
  return predictions;
}

bool HasAllTrueMasks(const LabeledDataset& ds, const GroupSystem& groups) {
  for (const GroupEntry& entry : groups.entries()) {
    if (ds.true_groups.find(entry.name) == ds.true_groups.end()) return false;
  }
  return !groups.empty();
}

std::optional<double> ReductionPct(double before, double after) {
  if (before == 0.0) return std::nullopt;
  return 100.0 * (before - after) / before;
}

}  // namespace

SplitFractions SplitFractions::Parse(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw DomainError("split '" + text + "': bad number '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
      ++used;
    }
    if (used != item.size() || !std::isfinite(v) || v < 0.0) {
      throw DomainError("split '" + text + "': bad fraction '" + item + "'");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3) {
    throw DomainError("split '" + text + "' must have three comma-separated parts");
  }
  if (std::abs(parts[0] + parts[1] + parts[2] - 1.0) > 1e-9) {
    throw DomainError("split '" + text + "' must sum to 1");
  }
  return SplitFractions{parts[0], parts[1], parts[2]};
}

SplitIndices MakeSplit(std::size_t n, const SplitFractions& fractions,
                       std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with an explicit draw so the order is portable across
  // standard library implementations.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  const auto n_train = static_cast<std::size_t>(std::llround(fractions.train * n));
  const auto n_adjust = std::min(
      n - std::min(n, n_train),
      static_cast<std::size_t>(std::llround(fractions.adjust * n)));
  SplitIndices split;
  const std::size_t t = std::min(n, n_train);
  split.train.assign(order.begin(), order.begin() + t);
  split.adjust.assign(order.begin() + t, order.begin() + t + n_adjust);
  split.eval.assign(order.begin() + t + n_adjust, order.end());
  return split;
}

PreparedData Prepare(const LoadedData& data, const PipelineOptions& options) {
  const LabeledDataset& ds = data.dataset;
  const std::size_t n = ds.row_count();
  if (n == 0) throw DomainError("dataset is empty");
  if (options.bins && *options.bins <= 0) {
    throw DomainError("bins must be positive");
  }
  PreparedData out;
  out.groups = data.groups;

  if (!data.has_predictions) {
    const SplitIndices split = MakeSplit(n, options.split, options.seed);
    if (split.train.empty()) {
      throw DomainError("no prediction column and an empty train split");
    }
    const FeatureMatrix train_x = data.features.Subset(split.train);
    std::vector<std::uint8_t> train_y;
    train_y.reserve(split.train.size());
    for (std::size_t i : split.train) train_y.push_back(ds.labels[i]);
    const BaselineModel model = TrainBaseline(train_x, train_y, options.baseline);
    std::vector<double> predictions = model.Predict(data.features);
    if (options.bins) predictions = Bin(std::move(predictions), *options.bins);
    const LabeledDataset scored = ds.WithPredictions(std::move(predictions));
    const std::vector<std::size_t> held_out = Concat(split.adjust, split.eval);
    if (held_out.empty()) throw DomainError("split leaves no rows to audit");
    out.audit = scored.Subset(held_out);
    out.adjust = scored.Subset(split.adjust);
    out.eval = scored.Subset(split.eval);
    out.notes.push_back("trained a " +
                        std::string(options.baseline == BaselineKind::kLogistic
                                        ? "logistic"
                                        : "stump-ensemble") +
                        " baseline on " + std::to_string(split.train.size()) +
                        " rows");
    return out;
  }

  LabeledDataset base = ds;
  if (options.bins) base = ds.WithPredictions(Bin(ds.predictions, *options.bins));
  const double rest = options.split.adjust + options.split.eval;
  if (rest <= 0.0) throw DomainError("split leaves no rows to adjust or evaluate");
  const SplitFractions two_way{0.0, options.split.adjust / rest,
                               options.split.eval / rest};
  const SplitIndices split = MakeSplit(n, two_way, options.seed);
  out.audit = base;
  out.adjust = base.Subset(split.adjust);
  out.eval = base.Subset(split.eval);
  return out;
}

StageReport EvaluateStage(const LabeledDataset& ds, const GroupSystem& groups,
                          bool with_truth) {
  StageReport stage;
  stage.rows = ds.row_count();
  stage.proxy = MeasureViolations(ds, groups, GroupSide::kProxy);
  stage.certificate = CertifyFromReport(stage.proxy, groups);
  if (with_truth && HasAllTrueMasks(ds, groups)) {
    stage.truth = MeasureViolations(ds, groups, GroupSide::kTrue);
    for (const GroupEntry& entry : groups.entries()) {
      stage.measured_proxy_error[entry.name] =
          ProxyError(ds.true_groups.at(entry.name), ds.proxy_groups.at(entry.name));
      const GroupViolation& t = stage.truth->per_group.at(entry.name);
      const GroupBound& b = stage.certificate.per_group.at(entry.name);
      if (t.ae > b.ae_bound + kBoundSlack || t.ece > b.ece_bound + kBoundSlack) {
        stage.truth_within_bounds = false;
      }
    }
  }
  return stage;
}

namespace {

void AddTruthNotes(const StageReport& stage, const GroupSystem& groups,
                   std::vector<std::string>& notes) {
  if (!stage.truth) return;
  for (const GroupEntry& entry : groups.entries()) {
    const double declared = entry.proxy_error.value_or(0.0);
    const double measured = stage.measured_proxy_error.at(entry.name);
    if (measured > declared) {
      std::ostringstream msg;
      msg << "group '" << entry.name << "': measured proxy error " << measured
          << " exceeds the declared " << declared;
      notes.push_back(msg.str());
    }
  }
  if (!stage.truth_within_bounds) {
    notes.push_back("warning: a true-group violation exceeds its certificate");
  }
}

}  // namespace

RunReport RunAudit(const LabeledDataset& ds, const GroupSystem& groups) {
  RunReport report;
  report.command = "audit";
  report.before = EvaluateStage(ds, groups, /*with_truth=*/true);
  AddTruthNotes(report.before, groups, report.notes);
  return report;
}

RunReport RunCertify(const LabeledDataset& ds, const GroupSystem& groups) {
  RunReport report;
  report.command = "certify";
  report.before = EvaluateStage(ds, groups, /*with_truth=*/false);
  return report;
}

AdjustRun RunAdjust(const LabeledDataset& adjust_rows,
                    const LabeledDataset& eval_rows, const GroupSystem& groups,
                    const AdjustOptions& options) {
  if (adjust_rows.row_count() == 0) throw DomainError("no rows to adjust on");
  if (eval_rows.row_count() == 0) throw DomainError("no rows to evaluate on");
  AdjustRun run;
  RunReport& report = run.report;
  report.before = EvaluateStage(eval_rows, groups, /*with_truth=*/true);

  const std::vector<NamedMask> fit_design =
      GroupDesign(adjust_rows, groups, GroupSide::kProxy);
  const std::vector<NamedMask> eval_design =
      GroupDesign(eval_rows, groups, GroupSide::kProxy);

  AdjustSummary summary;
  summary.adjust_rows = adjust_rows.row_count();
  if (options.method == AdjustMethod::kMa) {
    report.command = "adjust-ma";
    summary.method = "ma";
    const MaAdjustment fit = FitMa(adjust_rows.predictions, adjust_rows.labels,
                                   fit_design, MaOptions{options.clip});
    run.eval_predictions = fit.Apply(eval_rows.predictions, eval_design, options.clip);
    summary.applied = true;
    summary.lambdas = fit.lambdas;
    summary.clipped = fit.clipped;
    summary.rank_deficient = fit.rank_deficient;
    if (fit.rank_deficient) {
      report.notes.push_back("proxy design is rank deficient; used the minimum-norm fit");
    }
    if (options.clip) {
      report.notes.push_back("clipping is on; zero-bias and MSE guarantees no longer apply");
    }
  } else {
    report.command = "adjust-mc";
    summary.method = "mc";
    BoostConfig config;
    config.alpha = options.alpha;
    const BoostResult result =
        Boost(adjust_rows.predictions, adjust_rows.labels, fit_design, config);
    summary.alpha = options.alpha;
    summary.grid_m = result.grid_m;
    summary.rounds = result.rounds;
    summary.initial_guard = result.initial_guard;
    summary.final_guard = result.final_guard;
    summary.stopped_without_progress = result.stopped_without_progress;
    run.patch_log = result.patch_log;
    if (result.rounds == 0) {
      run.eval_predictions = eval_rows.predictions;
      summary.applied = false;
      report.notes.push_back("no adjustment needed: the input already meets alpha");
    } else {
      run.eval_predictions = ReplayPatches(eval_rows.predictions, eval_design,
                                           run.patch_log, result.grid_m);
      summary.applied = true;
    }
    if (result.stopped_without_progress) {
      report.notes.push_back("boosting stopped because the selected patch changed nothing");
    }
  }

  const LabeledDataset adjusted = eval_rows.WithPredictions(run.eval_predictions);
  report.after = EvaluateStage(adjusted, groups, /*with_truth=*/true);
  report.premises = CheckReductionPremises(report.before.proxy, report.after->proxy);
  report.reduction_pct = ReductionPct(report.before.certificate.gamma,
                                      report.after->certificate.gamma);
  report.beta_reduction_pct = ReductionPct(report.before.certificate.beta,
                                           report.after->certificate.beta);
  report.adjustment = summary;
  const bool hold = options.method == AdjustMethod::kMa ? report.premises->ma_hold
                                                       : report.premises->mc_hold;
  if (!hold) {
    report.notes.push_back(
        "reduction premises do not hold on the eval rows; a smaller certificate "
        "is not guaranteed");
  }
  AddTruthNotes(*report.after, groups, report.notes);
  return run;
}

}  // namespace proxycert
