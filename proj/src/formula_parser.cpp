// Copyright 2026 The evcomb Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Recursive-descent parser for the formula text grammar.

#include <cctype>

#include "evcomb/error.hpp"
#include "evcomb/formula.hpp"

namespace evcomb {
namespace {

enum class Tok { kIdent, kNot, kAnd, kOr, kImplies, kIff, kLParen, kRParen, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string_view text;
  std::size_t pos = 0;  // 0-based offset into the formula text
};

class Parser {
 public:
  Parser(std::string_view text, const AtomRegistry& registry, std::size_t line,
         std::size_t column_offset)
      : text_(text),
        registry_(registry),
        line_(line),
        column_offset_(column_offset) {
    Advance();
  }

  Formula ParseAll() {
    if (current_.kind == Tok::kEnd) Fail("expected a formula", current_.pos);
    Formula f = ParseIff();
    if (current_.kind != Tok::kEnd) {
      Fail("unexpected '" + std::string(current_.text) + "'", current_.pos);
    }
    return f;
  }

 private:
  [[noreturn]] void Fail(const std::string& message, std::size_t pos) const {
    throw ParseError(message, line_, column_offset_ + pos + 1);
  }

  void Advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    current_ = Token{Tok::kEnd, {}, pos_};
    if (pos_ >= text_.size()) return;

    const std::size_t start = pos_;
    auto take = [&](Tok kind, std::size_t len) {
      current_ = Token{kind, text_.substr(start, len), start};
      pos_ += len;
    };
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) ||
              text_[end] == '_')) {
        ++end;
      }
      take(Tok::kIdent, end - pos_);
      return;
    }
    switch (c) {
      case '!': take(Tok::kNot, 1); return;
      case '&': take(Tok::kAnd, 1); return;
      case '|': take(Tok::kOr, 1); return;
      case '(': take(Tok::kLParen, 1); return;
      case ')': take(Tok::kRParen, 1); return;
      case '-':
        if (text_.substr(pos_, 2) == "->") {
          take(Tok::kImplies, 2);
          return;
        }
        break;
      case '<':
        if (text_.substr(pos_, 3) == "<->") {
          take(Tok::kIff, 3);
          return;
        }
        break;
      default:
        break;
    }
    Fail(std::string("unexpected character '") + c + "'", start);
  }

  Formula ParseIff() {
    Formula lhs = ParseImplies();
    while (current_.kind == Tok::kIff) {
      Advance();
      lhs = Formula::Iff(std::move(lhs), ParseImplies());
    }
    return lhs;
  }

  Formula ParseImplies() {
    Formula lhs = ParseOr();
    if (current_.kind == Tok::kImplies) {
      Advance();
      return Formula::Implies(std::move(lhs), ParseImplies());
    }
    return lhs;
  }

  Formula ParseOr() {
    Formula lhs = ParseAnd();
    while (current_.kind == Tok::kOr) {
      Advance();
      lhs = Formula::Or(std::move(lhs), ParseAnd());
    }
    return lhs;
  }

  Formula ParseAnd() {
    Formula lhs = ParseUnary();
    while (current_.kind == Tok::kAnd) {
      Advance();
      lhs = Formula::And(std::move(lhs), ParseUnary());
    }
    return lhs;
  }

  Formula ParseUnary() {
    const Token tok = current_;
    switch (tok.kind) {
      case Tok::kNot:
        Advance();
        return Formula::Not(ParseUnary());
      case Tok::kLParen: {
        Advance();
        Formula inner = ParseIff();
        if (current_.kind != Tok::kRParen) {
          Fail("expected ')' to close '(' at column " +
                   std::to_string(column_offset_ + tok.pos + 1),
               current_.pos);
        }
        Advance();
        return inner;
      }
      case Tok::kIdent: {
        Advance();
        if (tok.text == "true" || tok.text == "TRUE") return Formula::Constant(true);
        if (tok.text == "false" || tok.text == "FALSE") return Formula::Constant(false);
        auto id = registry_.Find(tok.text);
        if (!id) Fail("undeclared atom '" + std::string(tok.text) + "'", tok.pos);
        return Formula::Var(*id);
      }
      case Tok::kEnd:
        Fail("unexpected end of formula", tok.pos);
      default:
        Fail("unexpected '" + std::string(tok.text) + "'", tok.pos);
    }
  }

  std::string_view text_;
  const AtomRegistry& registry_;
  std::size_t line_;
  std::size_t column_offset_;
  std::size_t pos_ = 0;
  Token current_;
};

}  // namespace

Formula ParseFormula(std::string_view text, const AtomRegistry& registry,
                     std::size_t line, std::size_t column_offset) {
  return Parser(text, registry, line, column_offset).ParseAll();
}

}  // namespace evcomb
