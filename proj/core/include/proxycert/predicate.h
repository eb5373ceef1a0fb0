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

// Group predicates: conjunctions of `column op constant` terms.
//
//   predicate := term ( '&' term )*
//   term      := column op number
//   op        := '=' | '==' | '!=' | '>' | '>=' | '<' | '<='
//
// Column names are runs of [A-Za-z0-9_.]. `&&` and the word `and` are
// accepted as conjunction separators.

#ifndef PROXYCERT_PREDICATE_H_
#define PROXYCERT_PREDICATE_H_

#include <string>
#include <string_view>
#include <vector>

#include "proxycert/dataset.h"
#include "proxycert/table.h"

namespace proxycert {

enum class CompareOp { kEq, kNe, kGt, kGe, kLt, kLe };

struct Comparison {
  std::string column;
  CompareOp op = CompareOp::kEq;
  double value = 0.0;
  bool operator==(const Comparison&) const = default;
};

struct Predicate {
  std::vector<Comparison> terms;

  // Throws DomainError with the offending position on malformed input.
  static Predicate Parse(std::string_view text);
  std::string ToString() const;

  // Throws DataError(kPredicateColumn) naming the column when a term refers
  // to a column the table lacks.
  Mask Evaluate(const Table& table) const;

  bool operator==(const Predicate&) const = default;
};

}  // namespace proxycert

#endif  // PROXYCERT_PREDICATE_H_
