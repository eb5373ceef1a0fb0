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

// Multicalibration boosting on a fixed prediction grid {0, 1/m, ..., 1}.
//
// Each round computes, for every (group, level) cell, the cell mass
// p = P[g = 1, f = v] and the calibration residual Delta = E[y - f | cell].
// While some group has P[g = 1] * E[Delta^2 | g = 1] > alpha, the cell with
// the largest p * Delta^2 is reassigned to the grid point nearest its label
// mean. All probabilities are empirical over the supplied rows.

#ifndef PROXYCERT_MC_BOOSTING_H_
#define PROXYCERT_MC_BOOSTING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxycert/group_design.h"

namespace proxycert {

struct BoostConfig {
  double alpha = 0.1;
  std::optional<int> max_rounds_override;
  std::optional<int> grid_m_override;

  // ceil(1/alpha) unless overridden.
  int grid_m() const;
  // ceil(4/alpha^2) unless overridden.
  int round_cap() const;
  // Throws DomainError unless alpha is in (0,1] and overrides are positive.
  void Validate() const;
};

struct PatchLogEntry {
  int round = 0;  // 1-based
  std::string group;
  int level_index = 0;   // v = level_index / m
  double level = 0.0;
  double cell_mass = 0.0;  // p = |cell| / n
  double cell_mean = 0.0;  // mean label in the cell
  double score = 0.0;      // p * Delta^2 at selection time
  int target_index = 0;    // v' = target_index / m, nearest grid point to cell_mean
  double target = 0.0;
  std::size_t rows_touched = 0;
  bool operator==(const PatchLogEntry&) const = default;
};

struct BoostResult {
  std::vector<double> adjusted_predictions;
  std::vector<PatchLogEntry> patch_log;
  int grid_m = 1;
  int rounds = 0;            // T
  double initial_guard = 0.0;
  double final_guard = 0.0;  // max_g P[g=1] * E[Delta^2 | g=1] at exit
  // The selected patch would not have changed any prediction.
  bool stopped_without_progress = false;
};

// Thrown when the loop is still above alpha after the round cap. Carries the
// patch log accumulated so far.
class RoundCapExceeded : public std::runtime_error {
 public:
  RoundCapExceeded(const std::string& what, std::vector<PatchLogEntry> log)
      : std::runtime_error(what), patch_log_(std::move(log)) {}
  const std::vector<PatchLogEntry>& patch_log() const { return patch_log_; }

 private:
  std::vector<PatchLogEntry> patch_log_;
};

// Index of the nearest grid point in {0, ..., m}; ties round up. Values
// outside [0,1] clamp to the grid ends.
int SnapIndex(double value, int m);
std::vector<double> SnapToGrid(std::span<const double> predictions, int m);

// E[Delta_{v,g}^2 | g = 1] on the grid-snapped predictor; 0 for an empty group.
double GroupAvgSqCalError(std::span<const double> predictions,
                          std::span<const std::uint8_t> labels,
                          std::span<const std::uint8_t> mask, int m);

// max over groups of P[g=1] * E[Delta^2 | g=1] on the snapped predictor.
double BoostGuard(std::span<const double> predictions,
                  std::span<const std::uint8_t> labels,
                  const std::vector<NamedMask>& masks, int m);

// Snaps once, then patches until the guard is at most alpha. Throws
// DomainError for invalid configurations or inputs and RoundCapExceeded when
// the cap is hit.
BoostResult Boost(std::span<const double> predictions,
                  std::span<const std::uint8_t> labels,
                  const std::vector<NamedMask>& masks, const BoostConfig& config);

// Applies a patch log to new rows: snap to the grid, then replay every patch
// in order against the named masks.
std::vector<double> ReplayPatches(std::span<const double> predictions,
                                  const std::vector<NamedMask>& masks,
                                  std::span<const PatchLogEntry> log, int m);

// One JSON object per line with round, group, v, v', mass and the remaining
// entry fields.
std::string PatchLogToLines(std::span<const PatchLogEntry> log);
std::vector<PatchLogEntry> ParsePatchLog(const std::string& text);

}  // namespace proxycert

#endif  // PROXYCERT_MC_BOOSTING_H_
