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

#ifndef PROXYCERT_ERROR_H_
#define PROXYCERT_ERROR_H_

#include <stdexcept>
#include <string>

namespace proxycert {

// Raised when an input violates an operation's precondition (empty data,
// mismatched lengths, out-of-range parameters, missing group information).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace proxycert

#endif  // PROXYCERT_ERROR_H_
