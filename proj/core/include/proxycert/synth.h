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

// Seeded synthetic populations with hidden group membership, imperfect proxy
// masks at a controlled error rate, and per-group label miscalibration.
//
// Features are discrete (levels 0..feature_levels-1), so every predictor that
// depends on the features alone takes finitely many values. Labels follow
//   P[y = 1 | x, z] = clamp(sigmoid(logit(x)) + sum_k bias_k * z_k, 0, 1)
// and the emitted prediction is sigmoid(overconfidence * logit(x)), which is
// calibrated overall when every bias is 0 and overconfidence is 1.

#ifndef PROXYCERT_SYNTH_H_
#define PROXYCERT_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "proxycert/loader.h"
#include "proxycert/table.h"

namespace proxycert {

struct SynthGroup {
  std::string name;
  double prevalence = 0.3;
  double proxy_error = 0.0;      // independent flip rate of the proxy mask
  double calibration_bias = 0.0;  // additive shift of P[y = 1] inside the group
};

struct SynthSpec {
  std::size_t n = 1000;
  int num_features = 3;
  int feature_levels = 4;
  double intercept = 0.0;
  double weight_scale = 1.0;
  double overconfidence = 1.0;
  std::vector<SynthGroup> groups;
  std::uint64_t seed = 0;
};

struct SynthData {
  Table table;
  DatasetSchema schema;  // declares each group's measured proxy error
  LoadedData data;       // same rows, already loaded through the schema
};

// Throws DomainError for infeasible settings.
SynthData GenerateSynth(const SynthSpec& spec);

// A miscalibrated scenario with several intersecting groups and proxies of
// error at most 0.05.
SynthSpec MiscalibratedScenario(std::size_t n, std::uint64_t seed);

}  // namespace proxycert

#endif  // PROXYCERT_SYNTH_H_
