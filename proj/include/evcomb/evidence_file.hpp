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

#ifndef EVCOMB_EVIDENCE_FILE_HPP_
#define EVCOMB_EVIDENCE_FILE_HPP_

// Line-oriented evidence files. One statement per line, '#' starts a comment:
//
//   prop NAME ["description"]
//   obs FORMULA [| CONDITION] : N / M
//   axiom FORMULA
//   bound LO <= P(FORMULA) <= HI
//   query P(FORMULA [| CONDITION])
//
// Inside obs and P(...) an unparenthesized '|' is the condition bar; write a
// disjunction there as "(A | B)". Atoms must be declared by prop before use.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evcomb/evidence.hpp"
#include "evcomb/formula.hpp"

namespace evcomb {

struct PropStatement {
  std::string name;
  std::string description;
  friend bool operator==(const PropStatement&, const PropStatement&) = default;
};

struct ObsStatement {
  Formula event;
  std::optional<Formula> condition;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  friend bool operator==(const ObsStatement&, const ObsStatement&) = default;
};

struct AxiomStatement {
  Formula formula;
  friend bool operator==(const AxiomStatement&, const AxiomStatement&) = default;
};

struct BoundStatement {
  double lo = 0.0;
  Formula formula;
  double hi = 1.0;
  friend bool operator==(const BoundStatement&, const BoundStatement&) = default;
};

struct QueryStatement {
  Formula event;
  std::optional<Formula> condition;
  friend bool operator==(const QueryStatement&, const QueryStatement&) = default;
};

using StatementBody = std::variant<PropStatement, ObsStatement, AxiomStatement,
                                   BoundStatement, QueryStatement>;

struct Statement {
  StatementBody body;
  std::size_t line = 0;
};

struct EvidenceFile {
  AtomRegistry registry;
  std::vector<Statement> statements;

  std::vector<QueryStatement> Queries() const;
};

// Compares atoms and statements; source line numbers are ignored.
bool SameContent(const EvidenceFile& a, const EvidenceFile& b);

// Throws ParseError (with line and column) on any syntax error, undeclared or
// duplicate atom, or count/bound outside its range.
EvidenceFile ParseEvidence(std::string_view text,
                           std::size_t max_atoms = kDefaultMaxAtoms);

// Canonical text that parses back to the same content.
std::string PrettyPrint(const EvidenceFile& file);
std::string FormatStatement(const StatementBody& body,
                            const AtomRegistry& registry);

// "P(B | A)" style rendering of a query.
std::string QueryText(const QueryStatement& query, const AtomRegistry& registry);

// Parses a single "P(...)" query against an existing registry.
QueryStatement ParseQuery(std::string_view text, const AtomRegistry& registry);

// Feeds the file's obs, axiom and bound statements into a knowledge base.
// Errors carry the offending statement's line.
KnowledgeBase BuildKnowledgeBase(const EvidenceFile& file);

}  // namespace evcomb

#endif  // EVCOMB_EVIDENCE_FILE_HPP_
