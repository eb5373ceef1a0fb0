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
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "proxycert/error.h"
#include "proxycert/report.h"
#include "proxycert/synth.h"
#include "proxycert/workflow.h"

namespace proxycert {
namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

AdjustRun BoostedRun() {
  const SynthData s = GenerateSynth(MiscalibratedScenario(4000, 31));
  const PreparedData p = Prepare(s.data, PipelineOptions{});
  AdjustOptions opts;
  opts.alpha = 0.04;
  AdjustRun run = RunAdjust(p.adjust, p.eval, p.groups, opts);
  run.report.seed = 31;
  return run;
}

TEST(ReportTest, JsonRoundTripsExactly) {
  const AdjustRun run = BoostedRun();
  const std::string text = RunReportToJson(run.report);
  EXPECT_EQ(ParseRunReport(text), run.report);
  const SynthData s = GenerateSynth(MiscalibratedScenario(500, 3));
  const RunReport audit = RunAudit(s.data.dataset, s.data.groups);
  EXPECT_EQ(ParseRunReport(RunReportToJson(audit)), audit);
  EXPECT_THROW(ParseRunReport("{"), DomainError);
  EXPECT_THROW(ParseRunReport("{\"command\": \"audit\"}"), DomainError);
}

TEST(ReportTest, GroupTableMatchesCertificate) {
  const AdjustRun run = BoostedRun();
  for (const StageReport* stage : {&run.report.before, &*run.report.after}) {
    const std::vector<GroupTableRow> rows = GroupTable(*stage);
    ASSERT_EQ(rows.size(), stage->certificate.per_group.size());
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(),
                               [](const auto& a, const auto& b) { return a.name < b.name; }));
    double ece_max = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    for (const GroupTableRow& r : rows) {
      ece_max = std::max(ece_max, r.ece);
      gamma = std::max(gamma, r.ece_bound);
      beta = std::max(beta, r.ae_bound);
      EXPECT_TRUE(r.true_ae.has_value());
    }
    EXPECT_EQ(ece_max, stage->proxy.ece_max);
    EXPECT_EQ(gamma, stage->certificate.gamma);
    EXPECT_EQ(beta, stage->certificate.beta);

    std::stringstream buf;
    WriteGroupTable(buf, rows);
    EXPECT_EQ(ReadGroupTable(buf), rows);
  }
}

TEST(ReportTest, GroupTableWithoutTruthLeavesColumnsEmpty) {
  const SynthData s = GenerateSynth(MiscalibratedScenario(500, 3));
  const std::vector<GroupTableRow> rows =
      GroupTable(RunCertify(s.data.dataset, s.data.groups).before);
  std::stringstream buf;
  WriteGroupTable(buf, rows);
  std::string header;
  std::string first;
  std::getline(buf, header);
  std::getline(buf, first);
  EXPECT_EQ(header, "name,proxy_error,f_term,ae,ece,ae_bound,ece_bound,true_ae,true_ece");
  EXPECT_EQ(first.substr(first.size() - 2), ",,");
  buf.clear();
  buf.seekg(0);
  const std::vector<GroupTableRow> back = ReadGroupTable(buf);
  EXPECT_EQ(back, rows);
  EXPECT_FALSE(back[0].true_ae.has_value());
}

TEST(ReportTest, RejectsMalformedGroupTable) {
  std::stringstream bad_header("name,ae\n");
  EXPECT_THROW(ReadGroupTable(bad_header), DomainError);
  std::stringstream short_row(
      "name,proxy_error,f_term,ae,ece,ae_bound,ece_bound,true_ae,true_ece\na,1,2\n");
  EXPECT_THROW(ReadGroupTable(short_row), DomainError);
}

TEST(ReportTest, WritesRunFiles) {
  const AdjustRun run = BoostedRun();
  const std::filesystem::path dir = std::filesystem::path(::testing::TempDir()) / "run_files";
  std::filesystem::remove_all(dir);
  WriteRunFiles(dir.string(), run.report, &run.patch_log);
  EXPECT_EQ(ParseRunReport(ReadFile(dir / "report.json")), run.report);
  EXPECT_EQ(ParsePatchLog(ReadFile(dir / "patches.jsonl")), run.patch_log);
  std::ifstream before(dir / "groups_before.csv");
  EXPECT_EQ(ReadGroupTable(before), GroupTable(run.report.before));
  std::ifstream after(dir / "groups_after.csv");
  EXPECT_EQ(ReadGroupTable(after), GroupTable(*run.report.after));
}

TEST(ReportTest, DeterministicForFixedSeed) {
  EXPECT_EQ(RunReportToJson(BoostedRun().report), RunReportToJson(BoostedRun().report));
}

TEST(ReportTest, SummaryMentionsEveryGroup) {
  const AdjustRun run = BoostedRun();
  const std::string summary = SummarizeRun(run.report);
  for (const auto& [name, b] : run.report.before.certificate.per_group) {
    EXPECT_NE(summary.find(name), std::string::npos);
  }
  EXPECT_NE(summary.find("gamma"), std::string::npos);
}

TEST(ReportTest, ReductionPercentMatchesDefinition) {
  const AdjustRun run = BoostedRun();
  const double gb = run.report.before.certificate.gamma;
  const double ga = run.report.after->certificate.gamma;
  EXPECT_EQ(*run.report.reduction_pct, 100.0 * (gb - ga) / gb);
}

}  // namespace
}  // namespace proxycert
