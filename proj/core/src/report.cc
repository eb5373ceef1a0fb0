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

#include "proxycert/report.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "proxycert/error.h"

namespace proxycert {
namespace {

using nlohmann::json;

json ToJson(const ViolationReport& r) {
  json groups = json::object();
  for (const auto& [name, v] : r.per_group) {
    groups[name] = {{"ae", v.ae}, {"ece", v.ece}};
  }
  return {{"mse", r.mse}, {"ae_max", r.ae_max}, {"ece_max", r.ece_max},
          {"groups", groups}};
}

ViolationReport ViolationsFromJson(const json& j) {
  ViolationReport r;
  r.mse = j.at("mse").get<double>();
  r.ae_max = j.at("ae_max").get<double>();
  r.ece_max = j.at("ece_max").get<double>();
  for (const auto& [name, v] : j.at("groups").items()) {
    r.per_group.emplace(name, GroupViolation{v.at("ae").get<double>(),
                                             v.at("ece").get<double>()});
  }
  return r;
}

json ToJson(const BoundCertificate& c) {
  json groups = json::object();
  for (const auto& [name, b] : c.per_group) {
    groups[name] = {{"proxy_error", b.proxy_error}, {"f_term", b.f_term},
                    {"proxy_ae", b.proxy_ae},       {"proxy_ece", b.proxy_ece},
                    {"ae_bound", b.ae_bound},       {"ece_bound", b.ece_bound}};
  }
  return {{"beta", c.beta}, {"gamma", c.gamma}, {"mse_used", c.mse_used},
          {"groups", groups}};
}

BoundCertificate CertificateFromJson(const json& j) {
  BoundCertificate c;
  c.beta = j.at("beta").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.mse_used = j.at("mse_used").get<double>();
  for (const auto& [name, b] : j.at("groups").items()) {
    GroupBound g;
    g.proxy_error = b.at("proxy_error").get<double>();
    g.f_term = b.at("f_term").get<double>();
    g.proxy_ae = b.at("proxy_ae").get<double>();
    g.proxy_ece = b.at("proxy_ece").get<double>();
    g.ae_bound = b.at("ae_bound").get<double>();
    g.ece_bound = b.at("ece_bound").get<double>();
    c.per_group.emplace(name, g);
  }
  return c;
}

json ToJson(const StageReport& s) {
  json j = {{"rows", s.rows},
            {"proxy", ToJson(s.proxy)},
            {"certificate", ToJson(s.certificate)}};
  if (s.truth) {
    j["truth"] = ToJson(*s.truth);
    j["measured_proxy_error"] = s.measured_proxy_error;
    j["truth_within_bounds"] = s.truth_within_bounds;
  }
  return j;
}

StageReport StageFromJson(const json& j) {
  StageReport s;
  s.rows = j.at("rows").get<std::size_t>();
  s.proxy = ViolationsFromJson(j.at("proxy"));
  s.certificate = CertificateFromJson(j.at("certificate"));
  if (j.contains("truth")) {
    s.truth = ViolationsFromJson(j.at("truth"));
    s.measured_proxy_error =
        j.at("measured_proxy_error").get<std::map<std::string, double>>();
    s.truth_within_bounds = j.at("truth_within_bounds").get<bool>();
  }
  return s;
}

json ToJson(const PremiseCheck& p) {
  return {{"mse_before", p.mse_before},
          {"mse_after", p.mse_after},
          {"min_ae_before", p.min_ae_before},
          {"min_ece_before", p.min_ece_before},
          {"ae_max_after", p.ae_max_after},
          {"ece_max_after", p.ece_max_after},
          {"mse_non_increasing", p.mse_non_increasing},
          {"ae_strict", p.ae_strict},
          {"ece_strict", p.ece_strict},
          {"ma_hold", p.ma_hold},
          {"mc_hold", p.mc_hold}};
}

PremiseCheck PremisesFromJson(const json& j) {
  PremiseCheck p;
  p.mse_before = j.at("mse_before").get<double>();
  p.mse_after = j.at("mse_after").get<double>();
  p.min_ae_before = j.at("min_ae_before").get<double>();
  p.min_ece_before = j.at("min_ece_before").get<double>();
  p.ae_max_after = j.at("ae_max_after").get<double>();
  p.ece_max_after = j.at("ece_max_after").get<double>();
  p.mse_non_increasing = j.at("mse_non_increasing").get<bool>();
  p.ae_strict = j.at("ae_strict").get<bool>();
  p.ece_strict = j.at("ece_strict").get<bool>();
  p.ma_hold = j.at("ma_hold").get<bool>();
  p.mc_hold = j.at("mc_hold").get<bool>();
  return p;
}

json ToJson(const AdjustSummary& a) {
  return {{"method", a.method},
          {"adjust_rows", a.adjust_rows},
          {"applied", a.applied},
          {"lambdas", a.lambdas},
          {"clipped", a.clipped},
          {"rank_deficient", a.rank_deficient},
          {"alpha", a.alpha},
          {"grid_m", a.grid_m},
          {"rounds", a.rounds},
          {"initial_guard", a.initial_guard},
          {"final_guard", a.final_guard},
          {"stopped_without_progress", a.stopped_without_progress}};
}

AdjustSummary AdjustFromJson(const json& j) {
  AdjustSummary a;
  a.method = j.at("method").get<std::string>();
  a.adjust_rows = j.at("adjust_rows").get<std::size_t>();
  a.applied = j.at("applied").get<bool>();
  a.lambdas = j.at("lambdas").get<std::map<std::string, double>>();
  a.clipped = j.at("clipped").get<bool>();
  a.rank_deficient = j.at("rank_deficient").get<bool>();
  a.alpha = j.at("alpha").get<double>();
  a.grid_m = j.at("grid_m").get<int>();
  a.rounds = j.at("rounds").get<int>();
  a.initial_guard = j.at("initial_guard").get<double>();
  a.final_guard = j.at("final_guard").get<double>();
  a.stopped_without_progress = j.at("stopped_without_progress").get<bool>();
  return a;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::optional<double> ParseOptionalDouble(const std::string& cell, int line_no) {
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw DomainError("group table line " + std::to_string(line_no) +
                      ": bad number '" + cell + "'");
  }
  return v;
}

constexpr const char* kGroupTableHeader =
    "name,proxy_error,f_term,ae,ece,ae_bound,ece_bound,true_ae,true_ece";

}  // namespace

std::string RunReportToJson(const RunReport& report) {
  json j;
  j["command"] = report.command;
  j["seed"] = report.seed;
  j["before"] = ToJson(report.before);
  if (report.after) j["after"] = ToJson(*report.after);
  if (report.premises) j["premises"] = ToJson(*report.premises);
  if (report.reduction_pct) j["reduction_pct"] = *report.reduction_pct;
  if (report.beta_reduction_pct) j["beta_reduction_pct"] = *report.beta_reduction_pct;
  if (report.adjustment) j["adjustment"] = ToJson(*report.adjustment);
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

RunReport ParseRunReport(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.before = StageFromJson(j.at("before"));
    if (j.contains("after")) r.after = StageFromJson(j.at("after"));
    if (j.contains("premises")) r.premises = PremisesFromJson(j.at("premises"));
    if (j.contains("reduction_pct")) r.reduction_pct = j.at("reduction_pct").get<double>();
    if (j.contains("beta_reduction_pct")) {
      r.beta_reduction_pct = j.at("beta_reduction_pct").get<double>();
    }
    if (j.contains("adjustment")) r.adjustment = AdjustFromJson(j.at("adjustment"));
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed run report: ") + e.what());
  }
}

std::vector<GroupTableRow> GroupTable(const StageReport& stage) {
  std::vector<GroupTableRow> rows;
  for (const auto& [name, b] : stage.certificate.per_group) {
    GroupTableRow row;
    row.name = name;
    row.proxy_error = b.proxy_error;
    row.f_term = b.f_term;
    row.ae = b.proxy_ae;
    row.ece = b.proxy_ece;
    row.ae_bound = b.ae_bound;
    row.ece_bound = b.ece_bound;
    if (stage.truth) {
      auto it = stage.truth->per_group.find(name);
      if (it != stage.truth->per_group.end()) {
        row.true_ae = it->second.ae;
        row.true_ece = it->second.ece;
      }
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const GroupTableRow& a, const GroupTableRow& b) { return a.name < b.name; });
  return rows;
}

void WriteGroupTable(std::ostream& out, const std::vector<GroupTableRow>& rows) {
  out << kGroupTableHeader << '\n';
  for (const GroupTableRow& r : rows) {
    out << r.name << ',' << FormatDouble(r.proxy_error) << ','
        << FormatDouble(r.f_term) << ',' << FormatDouble(r.ae) << ','
        << FormatDouble(r.ece) << ',' << FormatDouble(r.ae_bound) << ','
        << FormatDouble(r.ece_bound) << ','
        << (r.true_ae ? FormatDouble(*r.true_ae) : "") << ','
        << (r.true_ece ? FormatDouble(*r.true_ece) : "") << '\n';
  }
}

std::vector<GroupTableRow> ReadGroupTable(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kGroupTableHeader) {
    throw DomainError("group table has an unexpected header");
  }
  std::vector<GroupTableRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 9) {
      throw DomainError("group table line " + std::to_string(line_no) +
                        ": expected 9 fields");
    }
    auto required = [&](const std::string& c) {
      auto v = ParseOptionalDouble(c, line_no);
      if (!v) {
        throw DomainError("group table line " + std::to_string(line_no) +
                          ": missing value");
      }
      return *v;
    };
    GroupTableRow r;
    r.name = cells[0];
    r.proxy_error = required(cells[1]);
    r.f_term = required(cells[2]);
    r.ae = required(cells[3]);
    r.ece = required(cells[4]);
    r.ae_bound = required(cells[5]);
    r.ece_bound = required(cells[6]);
    r.true_ae = ParseOptionalDouble(cells[7], line_no);
    r.true_ece = ParseOptionalDouble(cells[8], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

void WriteRunFiles(const std::string& dir, const RunReport& report,
                   const std::vector<PatchLogEntry>* patch_log) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  auto open = [&](const char* name) {
    std::ofstream out(base / name);
    if (!out) throw DomainError("cannot write '" + (base / name).string() + "'");
    return out;
  };
  {
    auto out = open("report.json");
    out << RunReportToJson(report);
  }
  {
    auto out = open("groups_before.csv");
    WriteGroupTable(out, GroupTable(report.before));
  }
  if (report.after) {
    auto out = open("groups_after.csv");
    WriteGroupTable(out, GroupTable(*report.after));
  }
  if (patch_log) {
    auto out = open("patches.jsonl");
    out << PatchLogToLines(*patch_log);
  }
}

std::string SummarizeRun(const RunReport& report) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  auto stage = [&](const char* label, const StageReport& s) {
    out << label << " (" << s.rows << " rows): mse=" << s.proxy.mse
        << " proxy AE^max=" << s.proxy.ae_max
        << " proxy ECE^max=" << s.proxy.ece_max
        << " beta=" << s.certificate.beta << " gamma=" << s.certificate.gamma
        << '\n';
    for (const GroupTableRow& r : GroupTable(s)) {
      out << "  " << r.name << ": err=" << r.proxy_error << " F=" << r.f_term
          << " ae=" << r.ae << " ece=" << r.ece << " ae_bound=" << r.ae_bound
          << " ece_bound=" << r.ece_bound;
      if (r.true_ae) out << " true_ae=" << *r.true_ae << " true_ece=" << *r.true_ece;
      out << '\n';
    }
    if (s.truth) {
      out << "  true AE^max=" << s.truth->ae_max
          << " true ECE^max=" << s.truth->ece_max
          << (s.truth_within_bounds ? " (within bounds)" : " (BOUND VIOLATED)")
          << '\n';
    }
  };
  stage("before", report.before);
  if (report.after) stage("after", *report.after);
  if (report.premises) {
    out << "reduction premises: MC " << (report.premises->mc_hold ? "hold" : "fail")
        << ", MA " << (report.premises->ma_hold ? "hold" : "fail") << '\n';
  }
  if (report.reduction_pct) {
    out << "gamma reduction: " << *report.reduction_pct << "%\n";
  }
  for (const std::string& note : report.notes) out << "note: " << note << '\n';
  return out.str();
}

}  // namespace proxycert
