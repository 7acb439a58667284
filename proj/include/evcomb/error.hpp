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

#ifndef EVCOMB_ERROR_HPP_
#define EVCOMB_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evcomb {

enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kPolynomiality,
  kContradiction,
  kInfeasible,
  kNotConverged,
  kImpossibleCondition,
};

const char* ErrorKindName(ErrorKind kind);

// Base of every exception thrown by the library. `line` is the 1-based source
// line of the evidence statement responsible for the error, or 0 when the
// error does not originate in an evidence file.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0)
      : std::runtime_error(message), kind_(kind), line_(line) {}

  ErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(ErrorKind::kParse, Format(message, line, column), line),
        column_(column),
        bare_message_(message) {}

  std::size_t column() const { return column_; }
  const std::string& bare_message() const { return bare_message_; }

 private:
  static std::string Format(const std::string& message, std::size_t line,
                            std::size_t column) {
    if (line == 0) return "column " + std::to_string(column) + ": " + message;
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + message;
  }

  std::size_t column_;
  std::string bare_message_;
};

}  // namespace evcomb

#endif  // EVCOMB_ERROR_HPP_
