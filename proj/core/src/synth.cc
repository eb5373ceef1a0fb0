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

#include "proxycert/synth.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>

#include "proxycert/error.h"
#include "proxycert/metrics.h"

namespace proxycert {
namespace {

// Uniform [0,1) from the top 53 bits, independent of the standard library's
// distribution implementations.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double Next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool Bernoulli(double p) { return Next() < p; }
  int Integer(int levels) {
    return std::min(levels - 1, static_cast<int>(Next() * levels));
  }

 private:
  std::mt19937_64 engine_;
};

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void ValidateSpec(const SynthSpec& spec) {
  if (spec.n == 0) throw DomainError("synthetic dataset needs n >= 1");
  if (spec.num_features < 1) throw DomainError("need at least one feature");
  if (spec.feature_levels < 1) throw DomainError("feature_levels must be >= 1");
  if (!std::isfinite(spec.intercept) || !std::isfinite(spec.weight_scale) ||
      !std::isfinite(spec.overconfidence)) {
    throw DomainError("synthetic model parameters must be finite");
  }
  std::set<std::string> names;
  for (const SynthGroup& g : spec.groups) {
    if (g.name.empty() ||
        !std::all_of(g.name.begin(), g.name.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        })) {
      throw DomainError("synthetic group name '" + g.name +
                        "' must be non-empty [A-Za-z0-9_]");
    }
    if (!names.insert(g.name).second) {
      throw DomainError("duplicate synthetic group '" + g.name + "'");
    }
    if (!(g.prevalence >= 0.0 && g.prevalence <= 1.0)) {
      throw DomainError("prevalence of '" + g.name + "' must lie in [0,1]");
    }
    if (!(g.proxy_error >= 0.0 && g.proxy_error <= 1.0)) {
      throw DomainError("target proxy error of '" + g.name +
                        "' must lie in [0,1]");
    }
    if (!(g.calibration_bias >= -1.0 && g.calibration_bias <= 1.0)) {
      throw DomainError("calibration bias of '" + g.name +
                        "' must lie in [-1,1]");
    }
  }
}

}  // namespace

SynthData GenerateSynth(const SynthSpec& spec) {
  ValidateSpec(spec);
  Uniform rng(spec.seed);
  const std::size_t n = spec.n;
  const auto d = static_cast<std::size_t>(spec.num_features);
  const std::size_t k = spec.groups.size();

  std::vector<double> weights(d);
  for (double& w : weights) w = spec.weight_scale * (2.0 * rng.Next() - 1.0);
  const double center = 0.5 * (spec.feature_levels - 1);

  std::vector<std::vector<double>> features(d, std::vector<double>(n));
  std::vector<double> labels(n), predictions(n);
  std::vector<std::vector<double>> truth(k, std::vector<double>(n));
  std::vector<std::vector<double>> proxy(k, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double logit = spec.intercept;
    for (std::size_t j = 0; j < d; ++j) {
      const int level = rng.Integer(spec.feature_levels);
      features[j][i] = level;
      logit += weights[j] * (level - center);
    }
    double p = Sigmoid(logit);
    for (std::size_t g = 0; g < k; ++g) {
      const bool member = rng.Bernoulli(spec.groups[g].prevalence);
      const bool flip = rng.Bernoulli(spec.groups[g].proxy_error);
      truth[g][i] = member;
      proxy[g][i] = member != flip;
      if (member) p += spec.groups[g].calibration_bias;
    }
    labels[i] = rng.Bernoulli(std::clamp(p, 0.0, 1.0)) ? 1.0 : 0.0;
    predictions[i] = Sigmoid(spec.overconfidence * logit);
  }

  SynthData out;
  for (std::size_t j = 0; j < d; ++j) {
    const std::string name = "x" + std::to_string(j);
    out.table.AddColumn(name, std::move(features[j]));
    out.schema.feature_columns.push_back(name);
  }
  out.table.AddColumn("y", std::move(labels));
  out.table.AddColumn("prediction", std::move(predictions));
  out.schema.label_column = "y";
  out.schema.prediction_column = "prediction";
  for (std::size_t g = 0; g < k; ++g) {
    const std::string& name = spec.groups[g].name;
    Mask t(truth[g].begin(), truth[g].end());
    Mask p(proxy[g].begin(), proxy[g].end());
    GroupDef def;
    def.name = name;
    def.truth = Predicate{{Comparison{"z_" + name, CompareOp::kEq, 1.0}}};
    def.proxy = Predicate{{Comparison{"proxy_" + name, CompareOp::kEq, 1.0}}};
    // The proxy developer's estimate is the error rate on the whole sample.
    def.proxy_error = ProxyError(t, p);
    out.schema.groups.push_back(std::move(def));
    out.table.AddColumn("z_" + name, std::move(truth[g]));
    out.table.AddColumn("proxy_" + name, std::move(proxy[g]));
  }
  std::sort(out.schema.groups.begin(), out.schema.groups.end(),
            [](const GroupDef& a, const GroupDef& b) { return a.name < b.name; });
  out.data = LoadTable(out.table, out.schema);
  return out;
}

SynthSpec MiscalibratedScenario(std::size_t n, std::uint64_t seed) {
  SynthSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.num_features = 3;
  spec.feature_levels = 4;
  spec.intercept = -0.2;
  spec.weight_scale = 1.2;
  spec.overconfidence = 2.0;
  spec.groups = {
      {"group_a", 0.40, 0.03, 0.30},
      {"group_b", 0.35, 0.05, -0.30},
      {"group_c", 0.30, 0.02, 0.25},
  };
  return spec;
}

}  // namespace proxycert
