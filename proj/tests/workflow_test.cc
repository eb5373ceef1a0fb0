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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "proxycert/error.h"
#include "proxycert/report.h"
#include "proxycert/synth.h"
#include "proxycert/workflow.h"
#include "test_util.h"

namespace proxycert {
namespace {


TEST(SplitTest, ParsesFractions) {
  const SplitFractions s = SplitFractions::Parse("0.5,0.25,0.25");
  EXPECT_EQ(s.train, 0.5);
  EXPECT_EQ(s.adjust, 0.25);
  EXPECT_EQ(s.eval, 0.25);
  const SplitFractions d = SplitFractions::Parse("0.6,0.3,0.1");
  EXPECT_EQ(d.adjust, 0.3);
  for (const char* bad : {"", "0.5,0.5", "0.5,0.5,0.5", "a,b,c", "-0.1,0.6,0.5", "0.6,0.3,0.1,0"}) {
    EXPECT_THROW(SplitFractions::Parse(bad), DomainError) << bad;
  }
}

TEST(SplitTest, PartitionsRowsDeterministically) {
  const SplitIndices a = MakeSplit(1000, SplitFractions{}, 3);
  const SplitIndices b = MakeSplit(1000, SplitFractions{}, 3);
  const SplitIndices c = MakeSplit(1000, SplitFractions{}, 4);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.eval, b.eval);
  EXPECT_NE(a.train, c.train);
  EXPECT_EQ(a.train.size(), 600u);
  EXPECT_EQ(a.adjust.size(), 300u);
  EXPECT_EQ(a.eval.size(), 100u);
  std::set<std::size_t> all(a.train.begin(), a.train.end());
  all.insert(a.adjust.begin(), a.adjust.end());
  all.insert(a.eval.begin(), a.eval.end());
  EXPECT_EQ(all.size(), 1000u);
}

TEST(PrepareTest, SuppliedPredictionsAuditEveryRow) {
  const SynthData s = GenerateSynth(MiscalibratedScenario(1000, 1));
  PipelineOptions opts;
  opts.seed = 2;
  const PreparedData p = Prepare(s.data, opts);
  EXPECT_EQ(p.audit.row_count(), 1000u);
  EXPECT_EQ(p.adjust.row_count() + p.eval.row_count(), 1000u);
  EXPECT_EQ(p.adjust.row_count(), 750u);
  EXPECT_EQ(p.audit.predictions, s.data.dataset.predictions);
}

TEST(PrepareTest, TrainsBaselineWithoutPredictions) {
  SynthData s = GenerateSynth(MiscalibratedScenario(2000, 1));
  s.data.has_predictions = false;
  std::fill(s.data.dataset.predictions.begin(), s.data.dataset.predictions.end(), 0.0);
  PipelineOptions opts;
  opts.seed = 2;
  for (BaselineKind kind : {BaselineKind::kLogistic, BaselineKind::kStumpEnsemble}) {
    opts.baseline = kind;
    const PreparedData p = Prepare(s.data, opts);
    EXPECT_EQ(p.audit.row_count(), 800u);
    EXPECT_EQ(p.adjust.row_count(), 600u);
    EXPECT_EQ(p.eval.row_count(), 200u);
    EXPECT_FALSE(p.notes.empty());
    const auto [lo, hi] = std::minmax_element(p.audit.predictions.begin(),
                                              p.audit.predictions.end());
    EXPECT_GE(*lo, 0.0);
    EXPECT_LE(*hi, 1.0);
    EXPECT_LT(*lo, *hi);
  }
}

TEST(PrepareTest, BinsPredictions) {
  const SynthData s = GenerateSynth(MiscalibratedScenario(500, 1));
  PipelineOptions opts;
  opts.bins = 5;
  const PreparedData p = Prepare(s.data, opts);
  for (double f : p.audit.predictions) {
    EXPECT_EQ(f * 5, std::round(f * 5));
  }
  opts.bins = 0;
  EXPECT_THROW(Prepare(s.data, opts), DomainError);
}

TEST(AuditTest, PerfectProxiesGiveProxyEce) {
  SynthSpec spec;
  spec.n = 3000;
  spec.seed = 8;
  spec.overconfidence = 2.0;
  spec.groups = {{"a", 0.4, 0.0, 0.1}, {"b", 0.3, 0.0, -0.1}};
  const SynthData s = GenerateSynth(spec);
  const RunReport r = RunAudit(s.data.dataset, s.data.groups);
  EXPECT_EQ(r.command, "audit");
  EXPECT_EQ(r.before.certificate.gamma, r.before.proxy.ece_max);
  ASSERT_TRUE(r.before.truth.has_value());
  EXPECT_EQ(r.before.truth->ece_max, r.before.proxy.ece_max);
}

TEST(AuditTest, TrueViolationsSitUnderCertificate) {
  const SynthData s = GenerateSynth(MiscalibratedScenario(5000, 12));
  const RunReport r = RunAudit(s.data.dataset, s.data.groups);
  ASSERT_TRUE(r.before.truth.has_value());
  EXPECT_TRUE(r.before.truth_within_bounds);
  EXPECT_LE(r.before.truth->ece_max, r.before.certificate.gamma);
  EXPECT_LE(r.before.truth->ae_max, r.before.certificate.beta);
  for (const auto& [name, err] : r.before.measured_proxy_error) {
    EXPECT_EQ(err, *s.data.groups.Find(name)->proxy_error);
  }
}

TEST(AuditTest, UnderstatedErrorIsReported) {
  SynthData s = GenerateSynth(MiscalibratedScenario(5000, 12));
  std::vector<GroupEntry> entries = s.data.groups.entries();
  for (GroupEntry& e : entries) e.proxy_error = 0.0;
  const RunReport r = RunAudit(s.data.dataset, GroupSystem(entries));
  EXPECT_FALSE(r.notes.empty());
}

TEST(CertifyRunTest, IgnoresTruth) {
  const SynthData s = GenerateSynth(MiscalibratedScenario(1000, 12));
  const RunReport r = RunCertify(s.data.dataset, s.data.groups);
  EXPECT_EQ(r.command, "certify");
  EXPECT_FALSE(r.before.truth.has_value());
  EXPECT_EQ(r.before.certificate, Certify(s.data.dataset, s.data.groups));
}

TEST(AdjustTest, CalibratedModelNeedsNoAdjustment) {
  // Every (group, level) cell is exactly calibrated on the grid of alpha=0.1.
  const auto ds = testing::MakeDataset(
      {0.5, 0.5, 0.5, 0.5, 0.0, 1.0}, {0, 1, 1, 0, 0, 1},
      {{"a", Mask{1, 1, 0, 0, 1, 0}}, {"b", Mask{0, 0, 1, 1, 0, 1}}});
  const GroupSystem groups({testing::Entry("a", 0.01), testing::Entry("b", 0.02)});
  AdjustOptions opts;
  opts.method = AdjustMethod::kMc;
  opts.alpha = 0.1;
  const AdjustRun run = RunAdjust(ds, ds, groups, opts);
  ASSERT_TRUE(run.report.adjustment.has_value());
  EXPECT_EQ(run.report.adjustment->rounds, 0);
  EXPECT_FALSE(run.report.adjustment->applied);
  EXPECT_EQ(run.report.after->certificate.gamma, run.report.before.certificate.gamma);
  EXPECT_FALSE(run.report.premises->mc_hold);
  EXPECT_FALSE(run.report.premises->ece_strict);
  EXPECT_EQ(*run.report.reduction_pct, 0.0);
  const bool said = std::any_of(run.report.notes.begin(), run.report.notes.end(),
                                [](const std::string& n) {
                                  return n.find("no adjustment needed") != std::string::npos;
                                });
  EXPECT_TRUE(said);
  EXPECT_EQ(run.eval_predictions, ds.predictions);
}

TEST(AdjustTest, MultiaccuracyZerosProxyBiasInSample) {
  const SynthData s = GenerateSynth(MiscalibratedScenario(4000, 21));
  AdjustOptions opts;
  opts.method = AdjustMethod::kMa;
  const AdjustRun run = RunAdjust(s.data.dataset, s.data.dataset, s.data.groups, opts);
  EXPECT_EQ(run.report.command, "adjust-ma");
  for (const auto& [name, v] : run.report.after->proxy.per_group) {
    EXPECT_LE(v.ae, 1e-8) << name;
  }
  EXPECT_LE(run.report.after->proxy.mse, run.report.before.proxy.mse + 1e-12);
  EXPECT_EQ(run.report.adjustment->lambdas.size(), s.data.groups.size());
  if (run.report.premises->ma_hold) {
    EXPECT_LE(run.report.after->certificate.beta, run.report.before.certificate.beta + 1e-12);
  }
}

TEST(AdjustTest, BoostingShrinksCertificateOnMiscalibratedScenario) {
  const SynthData s = GenerateSynth(MiscalibratedScenario(20000, 5));
  PipelineOptions popts;
  popts.seed = 5;
  const PreparedData p = Prepare(s.data, popts);
  AdjustOptions opts;
  opts.method = AdjustMethod::kMc;
  opts.alpha = 0.0025;
  const AdjustRun run = RunAdjust(p.adjust, p.eval, p.groups, opts);
  const RunReport& r = run.report;
  EXPECT_EQ(r.command, "adjust-mc");
  ASSERT_TRUE(r.premises.has_value());
  EXPECT_TRUE(r.premises->mc_hold);
  EXPECT_LT(r.after->certificate.gamma, r.before.certificate.gamma);
  EXPECT_GT(*r.reduction_pct, 0.0);
}

}  // namespace
}  // namespace proxycert
