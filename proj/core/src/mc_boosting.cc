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

#include "proxycert/mc_boosting.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "proxycert/error.h"

namespace proxycert {
namespace {

// ceil() that ignores representation error just above an integer, so that
// e.g. 4 / 0.1^2 yields 400 rather than 401.
int CeilTolerant(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

double GridValue(int index, int m) {
  return static_cast<double>(index) / static_cast<double>(m);
}

void CheckInputs(std::span<const double> predictions,
                 std::span<const std::uint8_t> labels,
                 const std::vector<NamedMask>& masks) {
  const std::size_t n = predictions.size();
  if (n == 0) throw DomainError("dataset is empty");
  if (labels.size() != n) {
    throw DomainError("predictions and labels differ in length");
  }
  std::set<std::string> seen;
  for (const NamedMask& m : masks) {
    if (m.mask.size() != n) {
      throw DomainError("mask '" + m.name + "' does not match the row count");
    }
    if (!seen.insert(m.name).second) {
      throw DomainError("duplicate group '" + m.name + "'");
    }
  }
}

// Per-group, per-level counts of members and of positive labels. Integer
// statistics keep every Delta exact across incremental updates.
struct CellStats {
  int levels = 0;
  std::vector<long long> count;     // [group * levels + level]
  std::vector<long long> positive;  // same layout

  CellStats(std::size_t groups, int m)
      : levels(m + 1),
        count(groups * static_cast<std::size_t>(m + 1), 0),
        positive(groups * static_cast<std::size_t>(m + 1), 0) {}

  std::size_t At(std::size_t g, int level) const {
    return g * static_cast<std::size_t>(levels) + static_cast<std::size_t>(level);
  }
};

double CellDelta(long long count, long long positive, int level, int m) {
  return static_cast<double>(positive) / static_cast<double>(count) -
         GridValue(level, m);
}

// P[g=1] * E[Delta^2 | g=1] for group g.
double GroupGuard(const CellStats& stats, std::size_t g, int m, std::size_t n) {
  long long group_count = 0;
  for (int v = 0; v <= m; ++v) group_count += stats.count[stats.At(g, v)];
  if (group_count == 0) return 0.0;
  double conditional = 0.0;
  for (int v = 0; v <= m; ++v) {
    const long long c = stats.count[stats.At(g, v)];
    if (c == 0) continue;
    const double delta = CellDelta(c, stats.positive[stats.At(g, v)], v, m);
    conditional += (static_cast<double>(c) / static_cast<double>(group_count)) *
                   delta * delta;
  }
  return (static_cast<double>(group_count) / static_cast<double>(n)) *
         conditional;
}

double MaxGuard(const CellStats& stats, std::size_t groups, int m,
                std::size_t n) {
  double guard = 0.0;
  for (std::size_t g = 0; g < groups; ++g) {
    guard = std::max(guard, GroupGuard(stats, g, m, n));
  }
  return guard;
}

}  // namespace

int BoostConfig::grid_m() const {
  if (grid_m_override) return *grid_m_override;
  return std::max(1, CeilTolerant(1.0 / alpha));
}

int BoostConfig::round_cap() const {
  if (max_rounds_override) return *max_rounds_override;
  return CeilTolerant(4.0 / (alpha * alpha));
}

void BoostConfig::Validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in (0,1], got " << alpha;
    throw DomainError(msg.str());
  }
  if (max_rounds_override && *max_rounds_override < 1) {
    throw DomainError("round cap override must be positive");
  }
  if (grid_m_override && *grid_m_override < 1) {
    throw DomainError("grid size override must be positive");
  }
}

int SnapIndex(double value, int m) {
  if (!(value > 0.0)) return 0;
  if (value >= 1.0) return m;
  const double k = std::floor(value * static_cast<double>(m) + 0.5);
  return std::clamp(static_cast<int>(k), 0, m);
}

std::vector<double> SnapToGrid(std::span<const double> predictions, int m) {
  if (m < 1) throw DomainError("grid size must be at least 1");
  std::vector<double> out;
  out.reserve(predictions.size());
  for (double v : predictions) out.push_back(GridValue(SnapIndex(v, m), m));
  return out;
}

double GroupAvgSqCalError(std::span<const double> predictions,
                          std::span<const std::uint8_t> labels,
                          std::span<const std::uint8_t> mask, int m) {
  if (m < 1) throw DomainError("grid size must be at least 1");
  if (predictions.size() != labels.size() || predictions.size() != mask.size()) {
    throw DomainError("predictions, labels and mask differ in length");
  }
  std::vector<long long> count(static_cast<std::size_t>(m + 1), 0);
  std::vector<long long> positive(static_cast<std::size_t>(m + 1), 0);
  long long group_count = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (!mask[i]) continue;
    const auto v = static_cast<std::size_t>(SnapIndex(predictions[i], m));
    ++count[v];
    positive[v] += labels[i];
    ++group_count;
  }
  if (group_count == 0) return 0.0;
  double total = 0.0;
  for (int v = 0; v <= m; ++v) {
    const long long c = count[static_cast<std::size_t>(v)];
    if (c == 0) continue;
    const double delta =
        CellDelta(c, positive[static_cast<std::size_t>(v)], v, m);
    total += (static_cast<double>(c) / static_cast<double>(group_count)) *
             delta * delta;
  }
  return total;
}

double BoostGuard(std::span<const double> predictions,
                  std::span<const std::uint8_t> labels,
                  const std::vector<NamedMask>& masks, int m) {
  CheckInputs(predictions, labels, masks);
  const double n = static_cast<double>(predictions.size());
  double guard = 0.0;
  for (const NamedMask& g : masks) {
    const double mass =
        static_cast<double>(std::count(g.mask.begin(), g.mask.end(), 1)) / n;
    guard = std::max(guard,
                     mass * GroupAvgSqCalError(predictions, labels, g.mask, m));
  }
  return guard;
}

BoostResult Boost(std::span<const double> predictions,
                  std::span<const std::uint8_t> labels,
                  const std::vector<NamedMask>& masks,
                  const BoostConfig& config) {
  config.Validate();
  CheckInputs(predictions, labels, masks);
  const std::size_t n = predictions.size();
  const std::size_t groups = masks.size();
  const int m = config.grid_m();
  const int cap = config.round_cap();

  // Groups visited in name order so that equal (score, mass) ties resolve to
  // the lexicographically smaller name, then the lower level.
  std::vector<std::size_t> by_name(groups);
  std::iota(by_name.begin(), by_name.end(), std::size_t{0});
  std::sort(by_name.begin(), by_name.end(), [&](std::size_t a, std::size_t b) {
    return masks[a].name < masks[b].name;
  });

  std::vector<int> level(n);
  for (std::size_t i = 0; i < n; ++i) level[i] = SnapIndex(predictions[i], m);

  CellStats stats(groups, m);
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!masks[g].mask[i]) continue;
      ++stats.count[stats.At(g, level[i])];
      stats.positive[stats.At(g, level[i])] += labels[i];
    }
  }

  BoostResult result;
  result.grid_m = m;
  result.initial_guard = MaxGuard(stats, groups, m, n);
  double guard = result.initial_guard;
  int t = 0;
  while (guard > config.alpha) {
    if (t >= cap) {
      std::ostringstream msg;
      msg << "multicalibration boosting did not reach alpha=" << config.alpha
          << " within " << cap << " rounds (guard " << guard << ")";
      throw RoundCapExceeded(msg.str(), std::move(result.patch_log));
    }

    // Cell maximizing p * Delta^2; ties prefer larger p.
    bool found = false;
    std::size_t best_group = 0;
    int best_level = 0;
    double best_score = -1.0;
    long long best_count = 0;
    for (std::size_t g : by_name) {
      for (int v = 0; v <= m; ++v) {
        const long long c = stats.count[stats.At(g, v)];
        if (c == 0) continue;
        const double delta = CellDelta(c, stats.positive[stats.At(g, v)], v, m);
        const double score =
            (static_cast<double>(c) / static_cast<double>(n)) * delta * delta;
        if (!found || score > best_score ||
            (score == best_score && c > best_count)) {
          found = true;
          best_group = g;
          best_level = v;
          best_score = score;
          best_count = c;
        }
      }
    }
    if (!found) break;  // no populated cell; unreachable while guard > 0

    const long long best_positive = stats.positive[stats.At(best_group, best_level)];
    const double cell_mean =
        static_cast<double>(best_positive) / static_cast<double>(best_count);
    const int target = SnapIndex(cell_mean, m);
    if (target == best_level) {
      result.stopped_without_progress = true;
      break;
    }

    std::size_t touched = 0;
    const Mask& selected = masks[best_group].mask;
    for (std::size_t i = 0; i < n; ++i) {
      if (level[i] != best_level || !selected[i]) continue;
      for (std::size_t h = 0; h < groups; ++h) {
        if (!masks[h].mask[i]) continue;
        --stats.count[stats.At(h, best_level)];
        stats.positive[stats.At(h, best_level)] -= labels[i];
        ++stats.count[stats.At(h, target)];
        stats.positive[stats.At(h, target)] += labels[i];
      }
      level[i] = target;
      ++touched;
    }

    PatchLogEntry entry;
    entry.round = t + 1;
    entry.group = masks[best_group].name;
    entry.level_index = best_level;
    entry.level = GridValue(best_level, m);
    entry.cell_mass = static_cast<double>(best_count) / static_cast<double>(n);
    entry.cell_mean = cell_mean;
    entry.score = best_score;
    entry.target_index = target;
    entry.target = GridValue(target, m);
    entry.rows_touched = touched;
    result.patch_log.push_back(std::move(entry));

    ++t;
    guard = MaxGuard(stats, groups, m, n);
  }

  result.rounds = t;
  result.final_guard = guard;
  result.adjusted_predictions.reserve(n);
  for (int v : level) result.adjusted_predictions.push_back(GridValue(v, m));
  return result;
}

std::vector<double> ReplayPatches(std::span<const double> predictions,
                                  const std::vector<NamedMask>& masks,
                                  std::span<const PatchLogEntry> log, int m) {
  if (m < 1) throw DomainError("grid size must be at least 1");
  const std::size_t n = predictions.size();
  std::vector<int> level(n);
  for (std::size_t i = 0; i < n; ++i) level[i] = SnapIndex(predictions[i], m);
  for (const PatchLogEntry& entry : log) {
    auto it = std::find_if(masks.begin(), masks.end(), [&](const NamedMask& g) {
      return g.name == entry.group;
    });
    if (it == masks.end()) {
      throw DomainError("patch log refers to unknown group '" + entry.group + "'");
    }
    if (it->mask.size() != n) {
      throw DomainError("mask '" + entry.group + "' does not match the row count");
    }
    if (entry.level_index < 0 || entry.level_index > m ||
        entry.target_index < 0 || entry.target_index > m) {
      throw DomainError("patch log entry lies off the grid");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (level[i] == entry.level_index && it->mask[i]) {
        level[i] = entry.target_index;
      }
    }
  }
  std::vector<double> out;
  out.reserve(n);
  for (int v : level) out.push_back(GridValue(v, m));
  return out;
}

std::string PatchLogToLines(std::span<const PatchLogEntry> log) {
  std::string out;
  for (const PatchLogEntry& e : log) {
    nlohmann::ordered_json j;
    j["round"] = e.round;
    j["group"] = e.group;
    j["v"] = e.level;
    j["v_prime"] = e.target;
    j["mass"] = e.cell_mass;
    j["level_index"] = e.level_index;
    j["target_index"] = e.target_index;
    j["cell_mean"] = e.cell_mean;
    j["score"] = e.score;
    j["rows_touched"] = e.rows_touched;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<PatchLogEntry> ParsePatchLog(const std::string& text) {
  std::vector<PatchLogEntry> log;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      PatchLogEntry e;
      e.round = j.at("round").get<int>();
      e.group = j.at("group").get<std::string>();
      e.level = j.at("v").get<double>();
      e.target = j.at("v_prime").get<double>();
      e.cell_mass = j.at("mass").get<double>();
      e.level_index = j.at("level_index").get<int>();
      e.target_index = j.at("target_index").get<int>();
      e.cell_mean = j.at("cell_mean").get<double>();
      e.score = j.at("score").get<double>();
      e.rows_touched = j.at("rows_touched").get<std::size_t>();
      log.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw DomainError("patch log line " + std::to_string(line_no) + ": " +
                        ex.what());
    }
  }
  return log;
}

}  // namespace proxycert
