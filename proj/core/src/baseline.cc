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

#include "proxycert/baseline.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "proxycert/error.h"

namespace proxycert {
namespace {

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

void CheckTrainingData(const FeatureMatrix& x, std::span<const std::uint8_t> y) {
  if (x.rows != y.size()) {
    throw DomainError("feature rows and labels differ in length");
  }
  if (x.values.size() != x.rows * x.cols) {
    throw DomainError("feature matrix storage does not match its shape");
  }
  if (y.empty()) throw DomainError("no training rows");
  const auto positives = std::count(y.begin(), y.end(), std::uint8_t{1});
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
    throw DomainError("training labels contain a single class");
  }
}

double Linear(std::span<const double> row, std::span<const double> w, double b) {
  double z = b;
  for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * row[j];
  return z;
}

}  // namespace

FeatureMatrix FeatureMatrix::Subset(std::span<const std::size_t> row_indices) const {
  FeatureMatrix out;
  out.rows = row_indices.size();
  out.cols = cols;
  out.values.reserve(out.rows * cols);
  for (std::size_t r : row_indices) {
    const auto row = Row(r);
    out.values.insert(out.values.end(), row.begin(), row.end());
  }
  return out;
}

double LogisticLoss(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                    std::span<const double> weights, double bias) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double z = Linear(x.Row(i), weights, bias);
    loss += Softplus(z) - static_cast<double>(y[i]) * z;
  }
  return loss / static_cast<double>(x.rows);
}

std::vector<double> LogisticGradient(const FeatureMatrix& x,
                                     std::span<const std::uint8_t> y,
                                     std::span<const double> weights,
                                     double bias) {
  std::vector<double> grad(x.cols + 1, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto row = x.Row(i);
    const double r = Sigmoid(Linear(row, weights, bias)) - static_cast<double>(y[i]);
    for (std::size_t j = 0; j < x.cols; ++j) grad[j] += r * row[j];
    grad[x.cols] += r;
  }
  for (double& g : grad) g /= static_cast<double>(x.rows);
  return grad;
}

double LogisticModel::PredictRow(std::span<const double> row) const {
  return Sigmoid(Linear(row, weights, bias));
}

std::vector<double> LogisticModel::Predict(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = PredictRow(x.Row(i));
  return out;
}

LogisticModel TrainLogistic(const FeatureMatrix& x,
                            std::span<const std::uint8_t> y,
                            const LogisticOptions& options) {
  CheckTrainingData(x, y);
  const std::size_t d = x.cols;
  // Standardize internally; constant columns keep scale 1 and center to 0.
  std::vector<double> mean(d, 0.0), scale(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double v = x.values[i * d + j];
      s += v;
      s2 += v * v;
    }
    mean[j] = s / static_cast<double>(x.rows);
    const double var = s2 / static_cast<double>(x.rows) - mean[j] * mean[j];
    if (var > 1e-12) scale[j] = std::sqrt(var);
  }
  FeatureMatrix z = x;
  for (std::size_t i = 0; i < z.rows; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      z.values[i * d + j] = (z.values[i * d + j] - mean[j]) / scale[j];
    }
  }

  // The log-loss Hessian is bounded by (1/4n) sum_i x_i x_i^T (intercept
  // included); its trace bounds the curvature L, and a step of 1/L descends.
  double lr = options.learning_rate;
  if (lr <= 0.0) {
    double trace = 0.0;
    for (double v : z.values) trace += v * v;
    trace = trace / static_cast<double>(z.rows) + 1.0;
    lr = 4.0 / trace;
  }

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  LogisticModel model;
  model.loss_history.reserve(static_cast<std::size_t>(options.iterations) + 1);
  for (int it = 0; it < options.iterations; ++it) {
    model.loss_history.push_back(LogisticLoss(z, y, w, b));
    const std::vector<double> g = LogisticGradient(z, y, w, b);
    for (std::size_t j = 0; j < d; ++j) w[j] -= lr * g[j];
    b -= lr * g[d];
  }
  model.loss_history.push_back(LogisticLoss(z, y, w, b));

  model.weights.resize(d);
  model.bias = b;
  for (std::size_t j = 0; j < d; ++j) {
    model.weights[j] = w[j] / scale[j];
    model.bias -= w[j] * mean[j] / scale[j];
  }
  return model;
}

double StumpEnsemble::PredictRow(std::span<const double> row) const {
  double logit = base_logit;
  for (const Stump& s : stumps) {
    logit += row[s.feature] <= s.threshold ? s.left : s.right;
  }
  return Sigmoid(logit);
}

std::vector<double> StumpEnsemble::Predict(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = PredictRow(x.Row(i));
  return out;
}

StumpEnsemble TrainStumpEnsemble(const FeatureMatrix& x,
                                 std::span<const std::uint8_t> y,
                                 const StumpEnsembleOptions& options) {
  CheckTrainingData(x, y);
  constexpr double kHessianFloor = 1e-6;
  constexpr double kMaxLeaf = 4.0;
  const std::size_t n = x.rows;
  const std::size_t d = x.cols;

  const double positives =
      static_cast<double>(std::count(y.begin(), y.end(), std::uint8_t{1}));
  StumpEnsemble model;
  model.base_logit = std::log(positives / (static_cast<double>(n) - positives));

  // Candidate thresholds: midpoints between distinct values, thinned to at
  // most max_thresholds per feature.
  std::vector<std::vector<double>> thresholds(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = x.values[i * d + j];
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<double> mids;
    for (std::size_t k = 1; k < values.size(); ++k) {
      mids.push_back(0.5 * (values[k - 1] + values[k]));
    }
    const auto cap = static_cast<std::size_t>(std::max(1, options.max_thresholds));
    if (mids.size() > cap) {
      std::vector<double> thinned;
      for (std::size_t k = 0; k < cap; ++k) {
        thinned.push_back(mids[(k * mids.size()) / cap]);
      }
      mids = std::move(thinned);
    }
    thresholds[j] = std::move(mids);
  }

  std::vector<double> logit(n, model.base_logit);
  std::vector<double> grad(n), hess(n);
  for (int round = 0; round < options.rounds; ++round) {
    double g_total = 0.0, h_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(logit[i]);
      grad[i] = p - static_cast<double>(y[i]);
      hess[i] = p * (1.0 - p);
      g_total += grad[i];
      h_total += hess[i];
    }
    bool found = false;
    Stump best;
    double best_gain = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      for (double t : thresholds[j]) {
        double gl = 0.0, hl = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (x.values[i * d + j] <= t) {
            gl += grad[i];
            hl += hess[i];
          }
        }
        const double gr = g_total - gl;
        const double hr = h_total - hl;
        const double gain = gl * gl / (hl + kHessianFloor) +
                            gr * gr / (hr + kHessianFloor) -
                            g_total * g_total / (h_total + kHessianFloor);
        if (!found || gain > best_gain) {
          found = true;
          best_gain = gain;
          best.feature = j;
          best.threshold = t;
          best.left = std::clamp(-gl / (hl + kHessianFloor), -kMaxLeaf, kMaxLeaf) *
                      options.shrinkage;
          best.right = std::clamp(-gr / (hr + kHessianFloor), -kMaxLeaf, kMaxLeaf) *
                       options.shrinkage;
        }
      }
    }
    if (!found) break;  // every feature is constant
    for (std::size_t i = 0; i < n; ++i) {
      logit[i] += x.values[i * d + best.feature] <= best.threshold ? best.left
                                                                    : best.right;
    }
    model.stumps.push_back(best);
  }
  return model;
}

BaselineKind ParseBaselineKind(const std::string& name) {
  if (name == "logistic") return BaselineKind::kLogistic;
  if (name == "stumps" || name == "tree-stump-ensemble") {
    return BaselineKind::kStumpEnsemble;
  }
  throw DomainError("unknown baseline '" + name + "' (expected logistic or stumps)");
}

std::vector<double> BaselineModel::Predict(const FeatureMatrix& x) const {
  return kind == BaselineKind::kLogistic ? logistic.Predict(x) : stumps.Predict(x);
}

BaselineModel TrainBaseline(const FeatureMatrix& x,
                            std::span<const std::uint8_t> y, BaselineKind kind) {
  BaselineModel model;
  model.kind = kind;
  if (kind == BaselineKind::kLogistic) {
    model.logistic = TrainLogistic(x, y);
  } else {
    model.stumps = TrainStumpEnsemble(x, y);
  }
  return model;
}

}  // namespace proxycert
