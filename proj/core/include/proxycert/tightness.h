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

// Exact population-level evaluation on finite-support joint distributions of
// (f, y, g, proxy), and explicit distributions on which the proxy bounds hold
// with equality.

#ifndef PROXYCERT_TIGHTNESS_H_
#define PROXYCERT_TIGHTNESS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace proxycert {

struct Atom {
  double probability = 0.0;
  double f = 0.0;
  std::uint8_t y = 0;
  std::uint8_t g = 0;
  std::uint8_t g_hat = 0;
  bool operator==(const Atom&) const = default;
};

class FiniteJoint {
 public:
  // Throws DomainError unless every probability is positive, the total is
  // 1 within 1e-12, indicators are binary and no tuple repeats.
  explicit FiniteJoint(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  // mu_{i,j} = P[g = i, g_hat = j].
  double CellMass(int g, int g_hat) const;

 private:
  std::vector<Atom> atoms_;
};

struct PopulationMetrics {
  double mse = 0.0;
  double err = 0.0;
  double ae_true = 0.0;
  double ae_proxy = 0.0;
  double ece_true = 0.0;
  double ece_proxy = 0.0;
  double f_term = 0.0;
};

PopulationMetrics EvaluatePopulation(const FiniteJoint& joint);

// Square-root regime (0 < mse <= err): f = y wherever g == g_hat, and the
// cell {g = 1, g_hat = 0} of mass err carries f = sqrt(mse / err), y = 0.
// P[g = 0, g_hat = 1] = 0 and P[g = g_hat = 1] = mu11.
FiniteJoint BuildTightMaSqrt(double mse, double err, double mu11);

// Error-rate regime (0 < err < mse <= 1): the cell {g = 1, g_hat = 0} of mass
// err carries f = 1, y = 0, and the residual r = mse - err sits on the
// agreement block with f >= y. When r <= mu11 the whole cell {g = g_hat = 1}
// becomes one atom with y = 0, f = sqrt(r / mu11); otherwise that cell is
// f = 1, y = 0 and the overflow r - mu11 goes to {g = g_hat = 0} as f = 1,
// y = 0. Remaining agreement mass is predicted exactly.
FiniteJoint BuildTightMaErr(double mse, double err, double mu11);

// The calibration bound is attained by the same processes.
FiniteJoint BuildTightMcSqrt(double mse, double err, double mu11);
FiniteJoint BuildTightMcErr(double mse, double err, double mu11);

// One atom per line: probability f y g g_hat, whitespace separated, written
// with round-trip precision. Lines starting with '#' are comments.
std::string FormatJoint(const FiniteJoint& joint);
FiniteJoint ParseJoint(const std::string& text);

}  // namespace proxycert

#endif  // PROXYCERT_TIGHTNESS_H_
