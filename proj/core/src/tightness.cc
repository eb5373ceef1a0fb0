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

#include "proxycert/tightness.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "proxycert/bounds.h"
#include "proxycert/error.h"

namespace proxycert {
namespace {

constexpr double kMassTolerance = 1e-12;

void AddAtom(std::vector<Atom>& atoms, double p, double f, int y, int g,
             int g_hat) {
  if (p <= 0.0) return;
  atoms.push_back({p, f, static_cast<std::uint8_t>(y),
                   static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(g_hat)});
}

void CheckCommon(double mse, double err, double mu11) {
  if (!(err > 0.0)) {
    throw DomainError("tight constructions need err > 0");
  }
  if (!(mse > 0.0)) {
    throw DomainError("tight constructions need mse > 0");
  }
  if (err > 1.0 || mse > 1.0) {
    throw DomainError("mse and err must not exceed 1");
  }
  if (!(mu11 >= 0.0)) throw DomainError("mu11 must be non-negative");
  if (mu11 + err > 1.0) {
    throw DomainError("mu11 + err exceeds 1: the cells g=1 cannot fit");
  }
}

// Cell of the agreement block {g = g_hat} that is not the (1,1) cell.
double ZeroCellMass(double err, double mu11) { return 1.0 - err - mu11; }

}  // namespace

FiniteJoint::FiniteJoint(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw DomainError("joint distribution has no atoms");
  double total = 0.0;
  std::set<std::tuple<double, int, int, int>> seen;
  for (const Atom& a : atoms_) {
    if (!(a.probability > 0.0) || !std::isfinite(a.probability)) {
      throw DomainError("atom probabilities must be positive");
    }
    if (!std::isfinite(a.f)) throw DomainError("atom prediction is not finite");
    if (a.y > 1 || a.g > 1 || a.g_hat > 1) {
      throw DomainError("atom indicators must be 0/1");
    }
    if (!seen.emplace(a.f, a.y, a.g, a.g_hat).second) {
      throw DomainError("atoms must be distinct tuples");
    }
    total += a.probability;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "atom probabilities sum to " << total << ", not 1";
    throw DomainError(msg.str());
  }
}

double FiniteJoint::CellMass(int g, int g_hat) const {
  double mass = 0.0;
  for (const Atom& a : atoms_) {
    if (a.g == g && a.g_hat == g_hat) mass += a.probability;
  }
  return mass;
}

PopulationMetrics EvaluatePopulation(const FiniteJoint& joint) {
  PopulationMetrics pm;
  double bias_true = 0.0;
  double bias_proxy = 0.0;
  // Level set -> (E[g (f - y) 1{f=v}], E[g_hat (f - y) 1{f=v}]).
  std::map<double, std::pair<double, double>> levels;
  for (const Atom& a : joint.atoms()) {
    const double r = a.f - static_cast<double>(a.y);
    pm.mse += a.probability * r * r;
    if (a.g != a.g_hat) pm.err += a.probability;
    auto& cell = levels[a.f];
    if (a.g) {
      bias_true += a.probability * r;
      cell.first += a.probability * r;
    }
    if (a.g_hat) {
      bias_proxy += a.probability * r;
      cell.second += a.probability * r;
    }
  }
  pm.ae_true = std::abs(bias_true);
  pm.ae_proxy = std::abs(bias_proxy);
  for (const auto& [v, cell] : levels) {
    pm.ece_true += std::abs(cell.first);
    pm.ece_proxy += std::abs(cell.second);
  }
  // Rounding in the sum can push a full disagreement mass just past 1.
  pm.err = std::min(pm.err, 1.0);
  pm.f_term = FTerm(pm.mse, pm.err);
  return pm;
}

FiniteJoint BuildTightMaSqrt(double mse, double err, double mu11) {
  CheckCommon(mse, err, mu11);
  if (mse > err) {
    throw DomainError("square-root regime needs mse <= err");
  }
  const double disagreement_f = std::sqrt(mse / err);
  if (disagreement_f > 1.0) {
    throw DomainError("sqrt(mse / err) exceeds 1");
  }
  std::vector<Atom> atoms;
  // The misclassified cell carries all of the squared error:
  // err * (mse / err) = mse.
  AddAtom(atoms, err, disagreement_f, 0, 1, 0);
  AddAtom(atoms, mu11, 1.0, 1, 1, 1);
  AddAtom(atoms, ZeroCellMass(err, mu11), 0.0, 0, 0, 0);
  return FiniteJoint(std::move(atoms));
}

FiniteJoint BuildTightMaErr(double mse, double err, double mu11) {
  CheckCommon(mse, err, mu11);
  if (!(mse > err)) {
    throw DomainError("error-rate regime needs mse > err");
  }
  // The misclassified cell contributes err * (1 - 0)^2 = err; the agreement
  // block must supply the residual second moment with f >= y.
  const double residual = mse - err;
  std::vector<Atom> atoms;
  AddAtom(atoms, err, 1.0, 0, 1, 0);
  if (mu11 > 0.0 && residual <= mu11) {
    AddAtom(atoms, mu11, std::sqrt(residual / mu11), 0, 1, 1);
    AddAtom(atoms, ZeroCellMass(err, mu11), 0.0, 0, 0, 0);
  } else {
    const double zero_cell = ZeroCellMass(err, mu11);
    double overflow = residual - mu11;
    if (overflow > zero_cell + kMassTolerance) {
      throw DomainError("residual squared error does not fit the agreement block");
    }
    overflow = std::min(overflow, zero_cell);
    AddAtom(atoms, mu11, 1.0, 0, 1, 1);
    AddAtom(atoms, overflow, 1.0, 0, 0, 0);
    AddAtom(atoms, zero_cell - overflow, 0.0, 0, 0, 0);
  }
  return FiniteJoint(std::move(atoms));
}

FiniteJoint BuildTightMcSqrt(double mse, double err, double mu11) {
  return BuildTightMaSqrt(mse, err, mu11);
}

FiniteJoint BuildTightMcErr(double mse, double err, double mu11) {
  return BuildTightMaErr(mse, err, mu11);
}

std::string FormatJoint(const FiniteJoint& joint) {
  std::string out = "# probability f y g g_hat\n";
  char buf[128];
  for (const Atom& a : joint.atoms()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %d %d %d\n", a.probability,
                  a.f, a.y, a.g, a.g_hat);
    out += buf;
  }
  return out;
}

FiniteJoint ParseJoint(const std::string& text) {
  std::vector<Atom> atoms;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string tok[5];
    std::string extra;
    if (!(fields >> tok[0] >> tok[1] >> tok[2] >> tok[3] >> tok[4]) ||
        (fields >> extra)) {
      throw DomainError("joint line " + std::to_string(line_no) +
                        ": expected 5 fields");
    }
    double values[5];
    for (int k = 0; k < 5; ++k) {
      const char* b = tok[k].data();
      const char* e = b + tok[k].size();
      auto [ptr, ec] = std::from_chars(b, e, values[k]);
      if (ec != std::errc() || ptr != e) {
        throw DomainError("joint line " + std::to_string(line_no) +
                          ": bad number '" + tok[k] + "'");
      }
    }
    for (int k = 2; k < 5; ++k) {
      if (values[k] != 0.0 && values[k] != 1.0) {
        throw DomainError("joint line " + std::to_string(line_no) +
                          ": indicators must be 0/1");
      }
    }
    atoms.push_back({values[0], values[1], static_cast<std::uint8_t>(values[2]),
                     static_cast<std::uint8_t>(values[3]),
                     static_cast<std::uint8_t>(values[4])});
  }
  return FiniteJoint(std::move(atoms));
}

}  // namespace proxycert
