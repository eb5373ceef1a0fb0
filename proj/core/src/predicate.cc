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

#include "proxycert/predicate.h"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "proxycert/error.h"

namespace proxycert {
namespace {

bool IsNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }
  bool AtEnd() {
    SkipSpace();
    return pos_ >= text_.size();
  }

  std::string Name() {
    SkipSpace();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && IsNameChar(text_[pos_])) ++pos_;
    if (pos_ == start) Fail("expected a column name");
    return std::string(text_.substr(start, pos_ - start));
  }

  CompareOp Op() {
    SkipSpace();
    auto take = [&](std::string_view tok) {
      if (text_.substr(pos_, tok.size()) == tok) {
        pos_ += tok.size();
        return true;
      }
      return false;
    };
    if (take("==")) return CompareOp::kEq;
    if (take("!=")) return CompareOp::kNe;
    if (take(">=")) return CompareOp::kGe;
    if (take("<=")) return CompareOp::kLe;
    if (take("=")) return CompareOp::kEq;
    if (take(">")) return CompareOp::kGt;
    if (take("<")) return CompareOp::kLt;
    Fail("expected a comparison operator");
  }

  double Number() {
    SkipSpace();
    const char* b = text_.data() + pos_;
    const char* e = text_.data() + text_.size();
    if (b != e && *b == '+') ++b;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, value);
    if (ec != std::errc()) Fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  // Consumes a conjunction separator; false at end of input.
  bool Separator() {
    if (AtEnd()) return false;
    if (text_.substr(pos_, 2) == "&&") {
      pos_ += 2;
      return true;
    }
    if (text_[pos_] == '&') {
      ++pos_;
      return true;
    }
    if (text_.substr(pos_, 3) == "and" &&
        (pos_ + 3 == text_.size() || !IsNameChar(text_[pos_ + 3]))) {
      pos_ += 3;
      return true;
    }
    Fail("expected '&' between terms");
  }

  [[noreturn]] void Fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "predicate '" << text_ << "': " << what << " at position " << pos_;
    throw DomainError(msg.str());
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

const char* OpText(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "!=";
    case CompareOp::kGt: return ">";
    case CompareOp::kGe: return ">=";
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
  }
  return "?";
}

bool Compare(double lhs, CompareOp op, double rhs) {
  switch (op) {
    case CompareOp::kEq: return lhs == rhs;
    case CompareOp::kNe: return lhs != rhs;
    case CompareOp::kGt: return lhs > rhs;
    case CompareOp::kGe: return lhs >= rhs;
    case CompareOp::kLt: return lhs < rhs;
    case CompareOp::kLe: return lhs <= rhs;
  }
  return false;
}

}  // namespace

Predicate Predicate::Parse(std::string_view text) {
  Lexer lex(text);
  Predicate p;
  if (lex.AtEnd()) lex.Fail("empty predicate");
  do {
    Comparison c;
    c.column = lex.Name();
    c.op = lex.Op();
    c.value = lex.Number();
    p.terms.push_back(std::move(c));
  } while (lex.Separator());
  return p;
}

std::string Predicate::ToString() const {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " & ";
    std::snprintf(buf, sizeof(buf), "%.17g", terms[i].value);
    out += terms[i].column + " " + OpText(terms[i].op) + " " + buf;
  }
  return out;
}

Mask Predicate::Evaluate(const Table& table) const {
  Mask mask(table.row_count(), 1);
  for (const Comparison& c : terms) {
    const auto idx = table.ColumnIndex(c.column);
    if (!idx) {
      throw DataError(DataErrorKind::kPredicateColumn,
                      "group predicate refers to missing column '" + c.column +
                          "'");
    }
    const std::vector<double>& col = table.columns[*idx];
    for (std::size_t r = 0; r < mask.size(); ++r) {
      if (mask[r] && !Compare(col[r], c.op, c.value)) mask[r] = 0;
    }
  }
  return mask;
}

}  // namespace proxycert
