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

#ifndef PROXYCERT_GROUP_DESIGN_H_
#define PROXYCERT_GROUP_DESIGN_H_

#include <string>
#include <vector>

#include "proxycert/dataset.h"
#include "proxycert/metrics.h"

namespace proxycert {

struct NamedMask {
  std::string name;
  Mask mask;
};

// Masks for every entry of `groups`, taken from the requested side, in the
// group system's (lexicographic) order.
std::vector<NamedMask> GroupDesign(const LabeledDataset& ds,
                                   const GroupSystem& groups, GroupSide side);

}  // namespace proxycert

#endif  // PROXYCERT_GROUP_DESIGN_H_
