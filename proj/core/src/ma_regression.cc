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

#include "proxycert/ma_regression.h"

#include <algorithm>
#include <set>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

#include "proxycert/error.h"

namespace proxycert {
namespace {

// Relative pivot threshold below which the Gram matrix counts as singular.
constexpr double kRankThreshold = 1e-10;

}  // namespace

std::vector<double> MaAdjustment::Apply(std::span<const double> base,
                                        const std::vector<NamedMask>& masks,
                                        bool clip) const {
  std::vector<double> out(base.begin(), base.end());
  for (const auto& [name, lambda] : lambdas) {
    auto it = std::find_if(masks.begin(), masks.end(),
                           [&](const NamedMask& m) { return m.name == name; });
    if (it == masks.end()) {
      throw DomainError("no mask supplied for fitted group '" + name + "'");
    }
    if (it->mask.size() != out.size()) {
      throw DomainError("mask '" + name + "' does not match the row count");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (it->mask[i]) out[i] += lambda;
    }
  }
  if (clip) {
    for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

MaAdjustment FitMa(std::span<const double> predictions,
                   std::span<const std::uint8_t> labels,
                   const std::vector<NamedMask>& masks,
                   const MaOptions& options) {
  const std::size_t n = predictions.size();
  if (n == 0) throw DomainError("dataset is empty");
  if (labels.size() != n) {
    throw DomainError("predictions and labels differ in length");
  }
  std::set<std::string> seen;
  for (const NamedMask& m : masks) {
    if (m.mask.size() != n) {
      std::ostringstream msg;
      msg << "mask '" << m.name << "' has " << m.mask.size()
          << " entries, expected " << n;
      throw DomainError(msg.str());
    }
    if (!seen.insert(m.name).second) {
      throw DomainError("duplicate design group '" + m.name + "'");
    }
  }

  MaAdjustment fit;
  const Eigen::Index k = static_cast<Eigen::Index>(masks.size());
  if (k > 0) {
    // Normal equations of the residual regression r = y - f on the indicator
    // design, scaled by 1/n.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    std::vector<Eigen::Index> active;
    active.reserve(masks.size());
    for (std::size_t i = 0; i < n; ++i) {
      active.clear();
      for (Eigen::Index g = 0; g < k; ++g) {
        if (masks[static_cast<std::size_t>(g)].mask[i]) active.push_back(g);
      }
      const double residual = static_cast<double>(labels[i]) - predictions[i];
      for (Eigen::Index a : active) {
        rhs(a) += residual;
        for (Eigen::Index b : active) gram(a, b) += 1.0;
      }
    }
    gram /= static_cast<double>(n);
    rhs /= static_cast<double>(n);

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(kRankThreshold);
    cod.compute(gram);
    Eigen::VectorXd lambda;
    if (cod.rank() == k) {
      lambda = gram.llt().solve(rhs);
    } else {
      fit.rank_deficient = true;
      lambda = cod.solve(rhs);
    }
    for (Eigen::Index g = 0; g < k; ++g) {
      fit.lambdas.emplace(masks[static_cast<std::size_t>(g)].name, lambda(g));
    }
  }
  fit.clipped = options.clip;
  fit.adjusted_predictions = fit.Apply(predictions, masks, options.clip);
  return fit;
}

}  // namespace proxycert
