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

#include "evcomb/evidence_file.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "evcomb/error.hpp"

namespace evcomb {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// Cursor over one source line. Positions are 0-based; reported columns are
// 1-based.
class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line, const AtomRegistry& registry)
      : text_(text), line_(line), registry_(registry) {}

  [[noreturn]] void Fail(const std::string& message, std::size_t pos) const {
    throw ParseError(message, line_, pos + 1);
  }

  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }
  std::size_t line() const { return line_; }

  void SkipSpace() {
    while (pos_ < text_.size() && IsSpace(text_[pos_])) ++pos_;
  }

  bool AtEnd() {
    SkipSpace();
    return pos_ >= text_.size();
  }

  void ExpectEnd() {
    if (!AtEnd()) Fail("unexpected trailing text", pos_);
  }

  std::string_view Word() {
    SkipSpace();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && IsIdentChar(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void Expect(std::string_view literal) {
    SkipSpace();
    if (text_.substr(pos_, literal.size()) != literal) {
      Fail("expected '" + std::string(literal) + "'", pos_);
    }
    pos_ += literal.size();
  }

  std::uint64_t ReadCount(const char* what) {
    SkipSpace();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) Fail(std::string("expected ") + what, start);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || value > (std::uint64_t{1} << 53)) {
      Fail(std::string(what) + " is too large", start);
    }
    return value;
  }

  double ReadProbability() {
    SkipSpace();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
            text_[pos_] == '-' || text_[pos_] == '+')) {
      ++pos_;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (start == pos_ || ec != std::errc() || ptr != text_.data() + pos_) {
      Fail("expected a probability", start);
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      Fail("probability must lie in [0, 1]", start);
    }
    return value;
  }

  std::string ReadQuoted() {
    SkipSpace();
    const std::size_t open = pos_;
    if (pos_ >= text_.size() || text_[pos_] != '"') Fail("expected '\"'", pos_);
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) Fail("unterminated string", open);
    ++pos_;
    return out;
  }

  // Position of the ')' matching the '(' at `open`.
  std::size_t MatchingParen(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < text_.size(); ++i) {
      if (text_[i] == '(') ++depth;
      if (text_[i] == ')' && --depth == 0) return i;
    }
    Fail("unclosed '('", open);
  }

  Formula FormulaIn(std::size_t begin, std::size_t end) const {
    return ParseFormula(text_.substr(begin, end - begin), registry_, line_, begin);
  }

  // Parses "EVENT [| CONDITION]" in [begin, end). An unparenthesized '|' is
  // the condition bar.
  std::pair<Formula, std::optional<Formula>> Conditional(std::size_t begin,
                                                         std::size_t end,
                                                         bool allow_condition) const {
    std::optional<std::size_t> bar;
    int depth = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const char c = text_[i];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == '|' && depth == 0) {
        if (!allow_condition) {
          Fail("conditional bounds are not supported; parenthesize a "
               "disjunction as (A | B)", i);
        }
        if (bar) {
          Fail("more than one condition bar; parenthesize a disjunction as "
               "(A | B)", i);
        }
        bar = i;
      }
    }
    if (!bar) return {FormulaIn(begin, end), std::nullopt};
    return {FormulaIn(begin, *bar), FormulaIn(*bar + 1, end)};
  }

  // Parses "P( ... )" starting at the cursor; leaves the cursor after ')'.
  std::pair<Formula, std::optional<Formula>> ProbabilityTerm(bool allow_condition) {
    SkipSpace();
    if (text_.substr(pos_, 1) != "P") Fail("expected 'P('", pos_);
    ++pos_;
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != '(') Fail("expected '(' after 'P'", pos_);
    const std::size_t open = pos_;
    const std::size_t close = MatchingParen(open);
    auto result = Conditional(open + 1, close, allow_condition);
    pos_ = close + 1;
    return result;
  }

  std::string_view text() const { return text_; }
  const AtomRegistry& registry() const { return registry_; }

 private:
  std::string_view text_;
  std::size_t line_;
  const AtomRegistry& registry_;
  std::size_t pos_ = 0;
};

// Drops a trailing comment, respecting quoted strings.
std::string_view StripComment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
      continue;
    }
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

StatementBody ParseProp(LineParser& p, AtomRegistry& registry) {
  p.SkipSpace();
  const std::size_t at = p.pos();
  const std::string name(p.Word());
  if (name.empty()) p.Fail("expected an atom name", at);
  PropStatement prop{name, {}};
  if (!p.AtEnd()) prop.description = p.ReadQuoted();
  p.ExpectEnd();
  try {
    registry.Register(prop.name, prop.description);
  } catch (const Error& e) {
    p.Fail(e.what(), at);
  }
  return prop;
}

StatementBody ParseObs(LineParser& p) {
  const std::string_view text = p.text();
  const std::size_t colon = text.rfind(':');
  if (colon == std::string_view::npos || colon < p.pos()) {
    p.Fail("expected ': N / M' after the observed formula", text.size());
  }
  auto [event, condition] = p.Conditional(p.pos(), colon, true);
  p.set_pos(colon + 1);
  p.SkipSpace();
  const std::size_t counts_at = p.pos();
  ObsStatement obs{event, condition, 0, 0};
  obs.successes = p.ReadCount("a success count");
  p.Expect("/");
  obs.trials = p.ReadCount("a trial count");
  p.ExpectEnd();
  if (obs.trials == 0) p.Fail("an experiment needs at least one trial", counts_at);
  if (obs.successes > obs.trials) {
    p.Fail("success count " + std::to_string(obs.successes) +
               " exceeds trial count " + std::to_string(obs.trials),
           counts_at);
  }
  return obs;
}

StatementBody ParseBound(LineParser& p) {
  p.SkipSpace();
  const std::size_t at = p.pos();
  BoundStatement bound;
  bound.lo = p.ReadProbability();
  p.Expect("<=");
  bound.formula = p.ProbabilityTerm(false).first;
  p.Expect("<=");
  bound.hi = p.ReadProbability();
  p.ExpectEnd();
  if (bound.lo > bound.hi) p.Fail("lower bound exceeds upper bound", at);
  return bound;
}

StatementBody ParseQueryBody(LineParser& p) {
  auto [event, condition] = p.ProbabilityTerm(true);
  p.ExpectEnd();
  return QueryStatement{event, condition};
}

// Wraps formula text in parentheses when it contains a top-level '|', which
// would otherwise read as a condition bar.
std::string Guarded(std::string text) {
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == '|' && depth == 0) return "(" + text + ")";
  }
  return text;
}

std::string Number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string Conditioned(const Formula& event, const std::optional<Formula>& condition,
                        const AtomRegistry& registry) {
  std::string out = Guarded(ToString(event, registry));
  if (condition) out += " | " + Guarded(ToString(*condition, registry));
  return out;
}

}  // namespace

std::vector<QueryStatement> EvidenceFile::Queries() const {
  std::vector<QueryStatement> out;
  for (const Statement& s : statements) {
    if (const auto* q = std::get_if<QueryStatement>(&s.body)) out.push_back(*q);
  }
  return out;
}

bool SameContent(const EvidenceFile& a, const EvidenceFile& b) {
  if (a.registry.size() != b.registry.size()) return false;
  for (std::size_t i = 0; i < a.registry.size(); ++i) {
    const Atom& x = a.registry.atoms()[i];
    const Atom& y = b.registry.atoms()[i];
    if (x.name != y.name || x.description != y.description) return false;
  }
  if (a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i) {
    if (!(a.statements[i].body == b.statements[i].body)) return false;
  }
  return true;
}

EvidenceFile ParseEvidence(std::string_view text, std::size_t max_atoms) {
  EvidenceFile file{AtomRegistry(max_atoms), {}};
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    LineParser p(StripComment(line), line_no, file.registry);
    if (p.AtEnd()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t keyword_at = p.pos();
    const std::string_view keyword = p.Word();
    StatementBody body;
    if (keyword == "prop") {
      body = ParseProp(p, file.registry);
    } else if (keyword == "obs") {
      body = ParseObs(p);
    } else if (keyword == "axiom") {
      p.SkipSpace();
      body = AxiomStatement{p.FormulaIn(p.pos(), p.text().size())};
    } else if (keyword == "bound") {
      body = ParseBound(p);
    } else if (keyword == "query") {
      body = ParseQueryBody(p);
    } else {
      p.Fail("unknown statement '" +
                 std::string(keyword.empty() ? line.substr(keyword_at, 1) : keyword) +
                 "'; expected prop, obs, axiom, bound or query",
             keyword_at);
    }
    file.statements.push_back(Statement{std::move(body), line_no});
    if (end == text.size()) break;
  }
  return file;
}

std::string FormatStatement(const StatementBody& body,
                            const AtomRegistry& registry) {
  struct Visitor {
    const AtomRegistry& registry;
    std::string operator()(const PropStatement& s) const {
      std::string out = "prop " + s.name;
      if (!s.description.empty()) out += " " + Quote(s.description);
      return out;
    }
    std::string operator()(const ObsStatement& s) const {
      return "obs " + Conditioned(s.event, s.condition, registry) + " : " +
             std::to_string(s.successes) + " / " + std::to_string(s.trials);
    }
    std::string operator()(const AxiomStatement& s) const {
      return "axiom " + ToString(s.formula, registry);
    }
    std::string operator()(const BoundStatement& s) const {
      return "bound " + Number(s.lo) + " <= P(" +
             Guarded(ToString(s.formula, registry)) + ") <= " + Number(s.hi);
    }
    std::string operator()(const QueryStatement& s) const {
      return "query " + QueryText(s, registry);
    }
  };
  return std::visit(Visitor{registry}, body);
}

std::string PrettyPrint(const EvidenceFile& file) {
  std::string out;
  for (const Statement& s : file.statements) {
    out += FormatStatement(s.body, file.registry);
    out += '\n';
  }
  return out;
}

std::string QueryText(const QueryStatement& query, const AtomRegistry& registry) {
  return "P(" + Conditioned(query.event, query.condition, registry) + ")";
}

QueryStatement ParseQuery(std::string_view text, const AtomRegistry& registry) {
  LineParser p(text, 0, registry);
  return std::get<QueryStatement>(ParseQueryBody(p));
}

KnowledgeBase BuildKnowledgeBase(const EvidenceFile& file) {
  KnowledgeBase kb(file.registry);
  for (const Statement& s : file.statements) {
    if (const auto* obs = std::get_if<ObsStatement>(&s.body)) {
      kb.AddExperiment(Experiment{obs->event,
                                  obs->condition.value_or(Formula::Constant(true)),
                                  obs->successes, obs->trials, s.line});
    } else if (const auto* axiom = std::get_if<AxiomStatement>(&s.body)) {
      kb.AddAxiom(Axiom{axiom->formula, s.line});
    } else if (const auto* bound = std::get_if<BoundStatement>(&s.body)) {
      kb.AddInterval(IntervalConstraint{bound->formula, bound->lo, bound->hi, s.line});
    }
  }
  return kb;
}

}  // namespace evcomb
