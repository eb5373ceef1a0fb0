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

// proxycert: audit, certify and post-process a predictor against proxy
// groups. Run `proxycert <command> --help` for the options of a command.
//
// Exit status: 0 on success, 1 on any error, 2 when --require-alpha is given
// and the certified gamma exceeds it.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "proxycert/bounds.h"
#include "proxycert/error.h"
#include "proxycert/loader.h"
#include "proxycert/mc_boosting.h"
#include "proxycert/report.h"
#include "proxycert/schema.h"
#include "proxycert/synth.h"
#include "proxycert/table.h"
#include "proxycert/tightness.h"
#include "proxycert/workflow.h"

namespace {

using namespace proxycert;

constexpr int kExitError = 1;
constexpr int kExitAboveAlpha = 2;

struct Flags {
  std::string data;
  std::string config;
  std::string run;
  std::string out_dir;
  std::string split = "0.6,0.3,0.1";
  std::string baseline = "stumps";
  double alpha = 0.1;
  std::uint64_t seed = 0;
  std::optional<double> require_alpha;
  std::optional<int> bins;
  bool clip = false;
  std::size_t rows = 20000;
  int draws = 100;
};

void AddDataOptions(CLI::App* cmd, Flags& f) {
  cmd->add_option("--data", f.data, "CSV file with a header row")->required();
  cmd->add_option("--config", f.config, "dataset schema (key: value lines)")->required();
  cmd->add_option("--seed", f.seed, "seed for the split and the baseline");
  cmd->add_option("--split", f.split, "train,adjust,eval fractions");
  cmd->add_option("--bins", f.bins, "round predictions to multiples of 1/bins first");
  cmd->add_option("--baseline", f.baseline,
                  "model trained when the data has no prediction column (logistic|stumps)");
  cmd->add_option("--require-alpha", f.require_alpha,
                  "exit with status 2 unless the certified gamma is at most this level");
  cmd->add_option("--out-dir", f.out_dir, "directory for report.json and group tables");
}

PipelineOptions Pipeline(const Flags& f) {
  PipelineOptions opts;
  opts.split = SplitFractions::Parse(f.split);
  opts.seed = f.seed;
  opts.baseline = ParseBaselineKind(f.baseline);
  opts.bins = f.bins;
  return opts;
}

PreparedData Load(const Flags& f) {
  const LoadedData data = LoadCsv(f.data, DatasetSchema::ParseFile(f.config));
  PreparedData prepared = Prepare(data, Pipeline(f));
  for (const auto& [name, source] : data.error_sources) {
    if (source == ErrorSource::kMeasured) {
      prepared.notes.push_back("group '" + name +
                               "': no declared error; measured from the true mask");
    }
  }
  return prepared;
}

int Finish(RunReport report, const Flags& f, const std::vector<PatchLogEntry>* log,
           const std::vector<std::string>& notes) {
  report.seed = f.seed;
  report.notes.insert(report.notes.begin(), notes.begin(), notes.end());
  if (!f.out_dir.empty()) WriteRunFiles(f.out_dir, report, log);
  std::cout << SummarizeRun(report);
  if (f.require_alpha) {
    const double gamma =
        report.after ? report.after->certificate.gamma : report.before.certificate.gamma;
    if (!(gamma <= *f.require_alpha)) {
      std::cout << "certified gamma " << gamma << " exceeds the required "
                << *f.require_alpha << '\n';
      return kExitAboveAlpha;
    }
    std::cout << "certified gamma " << gamma << " meets the required " << *f.require_alpha
              << '\n';
  }
  return 0;
}

int CmdAudit(const Flags& f, bool with_truth) {
  const PreparedData p = Load(f);
  RunReport report = with_truth ? RunAudit(p.audit, p.groups) : RunCertify(p.audit, p.groups);
  return Finish(std::move(report), f, nullptr, p.notes);
}

int CmdAdjust(const Flags& f, AdjustMethod method) {
  const PreparedData p = Load(f);
  AdjustOptions opts;
  opts.method = method;
  opts.alpha = f.alpha;
  opts.clip = f.clip;
  try {
    AdjustRun run = RunAdjust(p.adjust, p.eval, p.groups, opts);
    return Finish(std::move(run.report), f,
                  method == AdjustMethod::kMc ? &run.patch_log : nullptr, p.notes);
  } catch (const RoundCapExceeded& e) {
    if (!f.out_dir.empty()) {
      std::filesystem::create_directories(f.out_dir);
      std::ofstream out(std::filesystem::path(f.out_dir) / "patches.jsonl");
      out << PatchLogToLines(e.patch_log());
    }
    std::cerr << "error: " << e.what() << " (" << e.patch_log().size()
              << " patches logged)\n";
    return kExitError;
  }
}

int CmdSynth(const Flags& f) {
  if (f.out_dir.empty()) throw DomainError("synth needs --out-dir");
  const SynthData s = GenerateSynth(MiscalibratedScenario(f.rows, f.seed));
  std::filesystem::create_directories(f.out_dir);
  const std::filesystem::path dir(f.out_dir);
  WriteCsvFile((dir / "data.csv").string(), s.table);
  std::ofstream cfg(dir / "schema.cfg");
  cfg << "# generated by proxycert synth --seed " << f.seed << '\n' << s.schema.ToString();
  std::cout << "wrote " << s.table.row_count() << " rows to " << (dir / "data.csv").string()
            << " and the schema to " << (dir / "schema.cfg").string() << '\n';
  return 0;
}

int CmdReport(const Flags& f) {
  std::filesystem::path path(f.run);
  if (std::filesystem::is_directory(path)) path /= "report.json";
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const RunReport report = ParseRunReport(buf.str());
  if (!f.out_dir.empty()) WriteRunFiles(f.out_dir, report);
  std::cout << SummarizeRun(report);
  return 0;
}

struct GapStats {
  double worst = 0.0;
  int draws = 0;
};

int CmdTightness(const Flags& f) {
  std::mt19937_64 rng(f.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GapStats ma_sqrt, ma_err, mc_sqrt, mc_err;
  FiniteJoint first_sqrt = BuildTightMaSqrt(0.04, 0.25, 0.3);
  FiniteJoint first_err = BuildTightMaErr(0.5, 0.1, 0.3);
  auto record = [](GapStats& s, double gap) {
    s.worst = std::max(s.worst, std::abs(gap));
    ++s.draws;
  };
  for (int d = 0; d < f.draws; ++d) {
    const double err_s = 0.01 + 0.99 * unit(rng);
    const double mse_s = err_s * (1e-3 + (1 - 1e-3) * unit(rng));
    const double mu_s = (1.0 - err_s) * unit(rng);
    const double err_e = 0.01 + 0.98 * unit(rng);
    const double mse_e = err_e + (1.0 - err_e) * (1e-3 + (1 - 1e-3) * unit(rng));
    const double mu_e = (1.0 - err_e) * unit(rng);
    PopulationMetrics m = EvaluatePopulation(BuildTightMaSqrt(mse_s, err_s, mu_s));
    record(ma_sqrt, m.ae_true - m.f_term - m.ae_proxy);
    m = EvaluatePopulation(BuildTightMcSqrt(mse_s, err_s, mu_s));
    record(mc_sqrt, m.ece_true - m.f_term - m.ece_proxy);
    m = EvaluatePopulation(BuildTightMaErr(mse_e, err_e, mu_e));
    record(ma_err, m.ae_true - m.f_term - m.ae_proxy);
    m = EvaluatePopulation(BuildTightMcErr(mse_e, err_e, mu_e));
    record(mc_err, m.ece_true - m.f_term - m.ece_proxy);
  }

  // Soundness on arbitrary joints: the bound may be slack but never violated.
  int violations = 0;
  const int joints = 10 * f.draws;
  for (int d = 0; d < joints; ++d) {
    std::vector<Atom> atoms;
    double total = 0.0;
    const int count = 1 + static_cast<int>(rng() % 6);
    for (int a = 0; a < count; ++a) {
      Atom atom{unit(rng) + 1e-3, std::round(4 * unit(rng)) / 4,
                static_cast<std::uint8_t>(rng() % 2), static_cast<std::uint8_t>(rng() % 2),
                static_cast<std::uint8_t>(rng() % 2)};
      bool dup = false;
      for (const Atom& b : atoms) {
        dup = dup || (b.f == atom.f && b.y == atom.y && b.g == atom.g && b.g_hat == atom.g_hat);
      }
      if (dup) continue;
      total += atom.probability;
      atoms.push_back(atom);
    }
    for (Atom& a : atoms) a.probability /= total;
    const PopulationMetrics m = EvaluatePopulation(FiniteJoint(atoms));
    if (m.ae_true > m.f_term + m.ae_proxy + 1e-12 || m.ece_true > m.f_term + m.ece_proxy + 1e-12) {
      ++violations;
    }
  }

  const double tol = 1e-12;
  bool ok = violations == 0;
  auto line = [&](const char* name, const GapStats& s) {
    ok = ok && s.worst <= tol;
    std::cout << name << ": " << s.draws << " draws, max |gap| " << s.worst
              << (s.worst <= tol ? "  ok" : "  FAIL") << '\n';
  };
  line("ma sqrt regime", ma_sqrt);
  line("ma err regime ", ma_err);
  line("mc sqrt regime", mc_sqrt);
  line("mc err regime ", mc_err);
  std::cout << "soundness: " << joints << " random joints, " << violations << " violations\n";
  if (!f.out_dir.empty()) {
    std::filesystem::create_directories(f.out_dir);
    const std::filesystem::path dir(f.out_dir);
    std::ofstream(dir / "joint_sqrt_regime.txt")
        << "# probability f y g g_hat (mse=0.04 err=0.25 mu11=0.3)\n" << FormatJoint(first_sqrt);
    std::ofstream(dir / "joint_err_regime.txt")
        << "# probability f y g g_hat (mse=0.5 err=0.1 mu11=0.3)\n" << FormatJoint(first_err);
  }
  return ok ? 0 : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify and reduce multiaccuracy / multicalibration violations using proxy groups"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* audit = app.add_subcommand(
      "audit", "proxy violations, certificates and, when present, true-group violations");
  AddDataOptions(audit, f);
  CLI::App* certify =
      app.add_subcommand("certify", "certificates from proxies and declared errors only");
  AddDataOptions(certify, f);

  CLI::App* adjust_ma = app.add_subcommand("adjust-ma", "multiaccuracy regression, then re-audit");
  AddDataOptions(adjust_ma, f);
  adjust_ma->add_flag("--clip", f.clip, "clip adjusted predictions to [0,1]");

  CLI::App* adjust_mc =
      app.add_subcommand("adjust-mc", "multicalibration boosting, then re-audit");
  AddDataOptions(adjust_mc, f);
  adjust_mc->add_option("--alpha", f.alpha, "boosting target in (0,1]")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App* synth = app.add_subcommand("synth", "write a seeded miscalibrated dataset");
  synth->add_option("--out-dir", f.out_dir, "output directory")->required();
  synth->add_option("--seed", f.seed, "generator seed");
  synth->add_option("--rows", f.rows, "number of rows")->check(CLI::PositiveNumber);

  CLI::App* report = app.add_subcommand("report", "summarize a saved run and rewrite its tables");
  report->add_option("--run", f.run, "report.json or the directory holding it")->required();
  report->add_option("--out-dir", f.out_dir, "directory for regenerated files");

  CLI::App* tightness =
      app.add_subcommand("tightness", "check that the bound constructions are tight");
  tightness->add_option("--seed", f.seed, "seed for parameter draws");
  tightness->add_option("--draws", f.draws, "parameter draws per construction")
      ->check(CLI::PositiveNumber);
  tightness->add_option("--out-dir", f.out_dir, "write example joints here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*audit) return CmdAudit(f, true);
    if (*certify) return CmdAudit(f, false);
    if (*adjust_ma) return CmdAdjust(f, AdjustMethod::kMa);
    if (*adjust_mc) return CmdAdjust(f, AdjustMethod::kMc);
    if (*synth) return CmdSynth(f);
    if (*report) return CmdReport(f);
    if (*tightness) return CmdTightness(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
