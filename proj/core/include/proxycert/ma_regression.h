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

// Multiaccuracy regression: shift a predictor by a linear combination of
// group indicators chosen by least squares. First-order optimality makes the
// result exactly unbiased on every design group, and lambda = 0 being
// feasible means the mean-squared error never increases.

#ifndef PROXYCERT_MA_REGRESSION_H_
#define PROXYCERT_MA_REGRESSION_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "proxycert/group_design.h"

namespace proxycert {

struct MaOptions {
  // Clip the adjusted predictions to [0,1]. Clipping voids the zero-bias and
  // MSE guarantees, so it is off by default.
  bool clip = false;
};

struct MaAdjustment {
  std::map<std::string, double> lambdas;
  std::vector<double> adjusted_predictions;
  bool clipped = false;
  // The Gram matrix was singular; lambdas are the minimum-norm solution.
  bool rank_deficient = false;

  // base + sum_g lambda_g * mask_g for new rows. Masks are matched by name;
  // throws DomainError when a fitted group is missing.
  std::vector<double> Apply(std::span<const double> base,
                            const std::vector<NamedMask>& masks,
                            bool clip) const;
};

// Solves min_lambda (1/n) sum_i (y_i - f_i - sum_g lambda_g mask_ig)^2 via the
// normal equations. Throws DomainError on empty input, length mismatches or
// duplicate group names.
MaAdjustment FitMa(std::span<const double> predictions,
                   std::span<const std::uint8_t> labels,
                   const std::vector<NamedMask>& masks,
                   const MaOptions& options = {});

}  // namespace proxycert

#endif  // PROXYCERT_MA_REGRESSION_H_
