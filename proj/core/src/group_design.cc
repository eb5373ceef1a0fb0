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

#include "proxycert/group_design.h"

namespace proxycert {

std::vector<NamedMask> GroupDesign(const LabeledDataset& ds,
                                   const GroupSystem& groups, GroupSide side) {
  std::vector<NamedMask> design;
  design.reserve(groups.size());
  for (const GroupEntry& entry : groups.entries()) {
    design.push_back({entry.name, GroupMask(ds, entry.name, side)});
  }
  return design;
}

}  // namespace proxycert
