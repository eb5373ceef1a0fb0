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

#ifndef PROXYCERT_DATASET_H_
#define PROXYCERT_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace proxycert {

// Group membership indicator, one entry per row, each 0 or 1.
using Mask = std::vector<std::uint8_t>;

// How strictly `LabeledDataset::Validate` treats prediction values. Datasets
// read from disk or generated must lie in [0,1]; post-processed predictors
// (e.g. unclipped least-squares output) may leave the interval but must stay
// finite.
enum class PredictionRange { kUnitInterval, kFinite };

// Predictions f(X), binary labels Y, and optional true / proxy group masks.
// A dataset with no true groups models the regime where sensitive attributes
// are unavailable.
struct LabeledDataset {
  std::vector<double> predictions;
  std::vector<std::uint8_t> labels;
  std::map<std::string, Mask> true_groups;
  std::map<std::string, Mask> proxy_groups;

  std::size_t row_count() const { return labels.size(); }

  // Throws DomainError on length mismatches, non-binary labels or masks, and
  // predictions outside the requested range.
  void Validate(PredictionRange range = PredictionRange::kUnitInterval) const;

  // Same groups and labels with a replacement prediction vector.
  LabeledDataset WithPredictions(std::vector<double> new_predictions) const;

  // Rows selected by index, in the given order.
  LabeledDataset Subset(std::span<const std::size_t> rows) const;
};

struct GroupEntry {
  std::string name;
  // Whether the dataset is expected to carry the true mask for this group.
  bool has_true = false;
  // err(proxy) as supplied by the proxy developer; unknown when absent.
  std::optional<double> proxy_error;
};

// Named groups with paired proxies. Entries are kept sorted by name so every
// report built from a GroupSystem has a deterministic order.
class GroupSystem {
 public:
  GroupSystem() = default;
  // Throws DomainError on duplicate names or proxy errors outside [0,1].
  explicit GroupSystem(std::vector<GroupEntry> entries);

  const std::vector<GroupEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const GroupEntry* Find(std::string_view name) const;
  std::vector<std::string> Names() const;

  // Group system covering every proxy mask in `ds`, with unknown errors.
  static GroupSystem FromProxyMasks(const LabeledDataset& ds);

 private:
  std::vector<GroupEntry> entries_;
};

}  // namespace proxycert

#endif  // PROXYCERT_DATASET_H_
