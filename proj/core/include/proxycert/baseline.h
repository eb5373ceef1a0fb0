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

// Baseline predictors trained from scratch so the audit / adjust workflow can
// run end to end when no model scores are supplied.

#ifndef PROXYCERT_BASELINE_H_
#define PROXYCERT_BASELINE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace proxycert {

// Row-major dense features.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> Row(std::size_t i) const {
    return {values.data() + i * cols, cols};
  }
  FeatureMatrix Subset(std::span<const std::size_t> row_indices) const;
};

// Mean log-loss of sigmoid(bias + w . x) and its gradient. The gradient is
// written as [d/dw..., d/dbias].
double LogisticLoss(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                    std::span<const double> weights, double bias);
std::vector<double> LogisticGradient(const FeatureMatrix& x,
                                     std::span<const std::uint8_t> y,
                                     std::span<const double> weights,
                                     double bias);

struct LogisticOptions {
  int iterations = 300;
  // Step size; 0 selects 1/L from a bound on the loss curvature, which makes
  // every step non-increasing in loss.
  double learning_rate = 0.0;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> loss_history;  // loss before each step, then final

  double PredictRow(std::span<const double> row) const;
  std::vector<double> Predict(const FeatureMatrix& x) const;
};

// Full-batch gradient descent from zero weights, fixed iteration count.
// Throws DomainError when labels contain a single class.
LogisticModel TrainLogistic(const FeatureMatrix& x,
                            std::span<const std::uint8_t> y,
                            const LogisticOptions& options = {});

struct Stump {
  std::size_t feature = 0;
  double threshold = 0.0;
  double left = 0.0;   // added to the logit when x[feature] <= threshold
  double right = 0.0;
};

struct StumpEnsembleOptions {
  int rounds = 40;
  double shrinkage = 0.5;
  int max_thresholds = 32;
};

// Gradient-boosted decision stumps on log-loss. Predictions take finitely
// many values, like a shallow tree model.
struct StumpEnsemble {
  double base_logit = 0.0;
  std::vector<Stump> stumps;

  double PredictRow(std::span<const double> row) const;
  std::vector<double> Predict(const FeatureMatrix& x) const;
};

StumpEnsemble TrainStumpEnsemble(const FeatureMatrix& x,
                                 std::span<const std::uint8_t> y,
                                 const StumpEnsembleOptions& options = {});

enum class BaselineKind { kLogistic, kStumpEnsemble };

// Throws DomainError for unknown names ("logistic", "stumps").
BaselineKind ParseBaselineKind(const std::string& name);

struct BaselineModel {
  BaselineKind kind = BaselineKind::kLogistic;
  LogisticModel logistic;
  StumpEnsemble stumps;

  std::vector<double> Predict(const FeatureMatrix& x) const;
};

BaselineModel TrainBaseline(const FeatureMatrix& x,
                            std::span<const std::uint8_t> y, BaselineKind kind);

}  // namespace proxycert

#endif  // PROXYCERT_BASELINE_H_
