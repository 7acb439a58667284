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

#include <gtest/gtest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "evcomb/error.hpp"
#include "evcomb/report.hpp"
#include "test_support.hpp"

namespace evcomb {
namespace {

using testing::DataPath;
using testing::ReadFile;

const Formula kA = Formula::Var(0);
const Formula kB = Formula::Var(1);

TEST(ParseEvidenceTest, PokerFile) {
  const EvidenceFile f = ParseEvidence(ReadFile(DataPath("poker_123.ev")));
  ASSERT_EQ(f.registry.size(), 2u);
  EXPECT_EQ(f.registry.atom(0).name, "A");
  EXPECT_EQ(f.registry.atom(1).description, "Harry has two pair");
  ASSERT_EQ(f.statements.size(), 12u);

  const auto& obs = std::get<ObsStatement>(f.statements[4].body);
  EXPECT_EQ(f.statements[4].line, 7u);
  EXPECT_EQ(obs.event, kB);
  ASSERT_TRUE(obs.condition.has_value());
  EXPECT_EQ(*obs.condition, kA);
  EXPECT_EQ(obs.successes, 5u);
  EXPECT_EQ(obs.trials, 6u);

  const auto queries = f.Queries();
  ASSERT_EQ(queries.size(), 7u);
  EXPECT_EQ(QueryText(queries[4], f.registry), "P(B | !A)");
}

TEST(ParseEvidenceTest, StatementForms) {
  const EvidenceFile f = ParseEvidence(
      "prop A \"a # not a comment\"  # a comment\n"
      "prop B\n"
      "\n"
      "axiom A -> B\n"
      "bound 0.25 <= P((A | B)) <= 0.75\n"
      "obs (A | B) | !A : 0/3\n"
      "query P((A | B) | !B)\n");
  EXPECT_EQ(f.registry.atom(0).description, "a # not a comment");
  ASSERT_EQ(f.statements.size(), 6u);
  EXPECT_EQ(std::get<AxiomStatement>(f.statements[2].body).formula,
            Formula::Implies(kA, kB));
  const auto& bound = std::get<BoundStatement>(f.statements[3].body);
  EXPECT_EQ(bound.lo, 0.25);
  EXPECT_EQ(bound.hi, 0.75);
  EXPECT_EQ(bound.formula, Formula::Or(kA, kB));
  const auto& obs = std::get<ObsStatement>(f.statements[4].body);
  EXPECT_EQ(obs.event, Formula::Or(kA, kB));
  EXPECT_EQ(*obs.condition, Formula::Not(kA));
  EXPECT_EQ(f.statements[5].line, 7u);
}

struct BadInput {
  const char* text;
  std::size_t line;
  std::size_t column;
  const char* fragment;
};

TEST(ParseEvidenceTest, ErrorsPointAtLineAndColumn) {
  const BadInput cases[] = {
      {"prop A\nobs A : 5 / 3\n", 2, 9, "exceeds trial count"},
      {"prop A\nobs A : 1 / 0\n", 2, 9, "at least one trial"},
      {"prop A\nobs Z : 1 / 2\n", 2, 5, "undeclared atom 'Z'"},
      {"prop A\nprop A\n", 2, 6, "duplicate atom name"},
      {"prop A\nfoo A\n", 2, 1, "unknown statement 'foo'"},
      {"prop A\nprop B\nquery P(A | B | A)\n", 3, 0, "more than one condition bar"},
      {"prop A\nprop B\nbound 0.1 <= P(A | B) <= 0.2\n", 3, 0, "conditional bounds"},
      {"prop A\nbound 0.1 <= P(A) <= 1.5\n", 2, 0, "[0, 1]"},
      {"prop A\nbound 0.6 <= P(A) <= 0.5\n", 2, 7, "lower bound exceeds"},
      {"prop A\nobs A 1 / 2\n", 2, 0, "': N / M'"},
      {"prop A \"open\n", 1, 0, "unterminated string"},
      {"prop A\nquery P(A\n", 2, 8, "unclosed"},
      {"prop true\n", 1, 6, "true"},
  };
  for (const BadInput& c : cases) {
    SCOPED_TRACE(c.text);
    try {
      ParseEvidence(c.text);
      ADD_FAILURE() << "expected a parse error";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line);
      if (c.column != 0) EXPECT_EQ(e.column(), c.column);
      EXPECT_NE(std::string(e.what()).find(c.fragment), std::string::npos) << e.what();
    }
  }
}

TEST(ParseEvidenceTest, AtomCapIsConfigurable) {
  std::string text;
  for (int i = 0; i < 21; ++i) text += "prop x" + std::to_string(i) + "\n";
  EXPECT_THROW(ParseEvidence(text), ParseError);
  EXPECT_EQ(ParseEvidence(text, 21).registry.size(), 21u);
}

TEST(ParseQueryTest, ConditionBar) {
  const EvidenceFile f = ParseEvidence("prop A\nprop B\n");
  const QueryStatement q = ParseQuery("P(A & B | !A)", f.registry);
  EXPECT_EQ(q.event, Formula::And(kA, kB));
  EXPECT_EQ(*q.condition, Formula::Not(kA));
  EXPECT_THROW(ParseQuery("A & B", f.registry), ParseError);
}

// Random files survive printing and re-parsing.
EvidenceFile RandomFile(std::mt19937_64& rng) {
  const std::size_t n = 1 + rng() % 4;
  std::string text;
  const char* descriptions[] = {"", "plain", "with \\\"quotes\\\"", "hash # inside",
                                "back\\\\slash"};
  for (std::size_t i = 0; i < n; ++i) {
    text += "prop p" + std::to_string(i);
    const char* d = descriptions[rng() % 5];
    if (*d) text += std::string(" \"") + d + "\"";
    text += "\n";
  }
  EvidenceFile file = ParseEvidence(text);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::uint64_t> count(1, 1000);
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < 8; ++s) {
    const Formula f = testing::RandomFormula(rng, n, 3);
    const Formula g = testing::RandomFormula(rng, n, 2);
    StatementBody body;
    switch (rng() % 4) {
      case 0: {
        const std::uint64_t m = count(rng);
        body = ObsStatement{f, coin(rng) ? std::optional<Formula>(g) : std::nullopt,
                            m / 3, m};
        break;
      }
      case 1: body = AxiomStatement{f}; break;
      case 2: {
        const double lo = unit(rng) * 0.5;
        body = BoundStatement{lo, f, lo + unit(rng) * 0.5};
        break;
      }
      default:
        body = QueryStatement{f, coin(rng) ? std::optional<Formula>(g) : std::nullopt};
    }
    file.statements.push_back(Statement{std::move(body), 0});
  }
  return file;
}

TEST(PrettyPrintTest, RoundTripsRandomFiles) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const EvidenceFile file = RandomFile(rng);
    const std::string printed = PrettyPrint(file);
    const EvidenceFile back = ParseEvidence(printed);
    ASSERT_TRUE(SameContent(file, back)) << printed;
    ASSERT_EQ(PrettyPrint(back), printed);
  }
}

TEST(PrettyPrintTest, PokerFile) {
  const EvidenceFile f = ParseEvidence(ReadFile(DataPath("poker_123.ev")));
  const std::string printed = PrettyPrint(f);
  EXPECT_NE(printed.find("prop A \"Harry lit his pipe\"\n"), std::string::npos);
  EXPECT_NE(printed.find("obs B | A : 5 / 6\n"), std::string::npos);
  EXPECT_NE(printed.find("query P(A | !B)\n"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Reports

TEST(FormatIntervalTest, Examples) {
  EXPECT_EQ(FormatInterval({0.0, 0.125, false, false}), "0.000 : 0.125");
  EXPECT_EQ(FormatInterval({0.3, 0.3, true, false}), "0.300");
  EXPECT_EQ(FormatInterval({0.2, 0.342857, false, false}), "0.200 : 0.343");
}

TEST(EmitReportTest, TextTable) {
  const RunOutcome out = evcomb::Run(ReadFile(DataPath("poker_12.ev")), RunOptions{});
  ASSERT_EQ(out.exit_code, 0);
  const std::string text = EmitReport(out.table, ReportFormat::kText);
  EXPECT_NE(text.find("status: converged\n"), std::string::npos);
  EXPECT_NE(text.find("null-space dimension: 1\n"), std::string::npos);
  EXPECT_NE(text.find("P(A & B)   0.000 : 0.125\n"), std::string::npos) << text;
  EXPECT_NE(text.find("P(A)       0.300\n"), std::string::npos) << text;
}

TEST(EmitReportTest, EmptyQueryListGivesMetadataOnly) {
  const RunOutcome out = evcomb::Run("prop A\nobs A : 1 / 4\n", RunOptions{});
  ASSERT_EQ(out.exit_code, 0);
  const std::string text = EmitReport(out.table, ReportFormat::kText);
  EXPECT_NE(text.find("log-likelihood:"), std::string::npos);
  EXPECT_EQ(text.find("Event"), std::string::npos);
  const auto j = nlohmann::json::parse(EmitReport(out.table, ReportFormat::kJson));
  EXPECT_TRUE(j["queries"].is_array());
  EXPECT_TRUE(j["queries"].empty());
  EXPECT_NEAR(j["log_likelihood"].get<double>(), std::log(0.25) + 3 * std::log(0.75), 1e-9);
}

TEST(EmitReportTest, JsonIsDeterministicAndComplete) {
  RunOptions options;
  options.dump_jdv = true;
  options.dump_nullspace = true;
  const std::string text = ReadFile(DataPath("poker_12.ev"));
  const std::string a = EmitReport(evcomb::Run(text, options).table, ReportFormat::kJson);
  const std::string b = EmitReport(evcomb::Run(text, options).table, ReportFormat::kJson);
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["status"], "converged");
  EXPECT_EQ(j["nullspace_dim"], 1);
  ASSERT_EQ(j["jdv"].size(), 4u);
  ASSERT_EQ(j["worlds"].size(), 4u);
  EXPECT_EQ(j["worlds"][1], "A=1 B=0");
  ASSERT_EQ(j["nullspace"].size(), 1u);
  ASSERT_EQ(j["queries"].size(), 7u);
  EXPECT_EQ(j["queries"][2]["text"], "P(A & B)");
  EXPECT_NEAR(j["queries"][2]["hi"].get<double>(), 0.125, 1e-6);
  EXPECT_FALSE(j["queries"][2]["degenerate"].get<bool>());
}

TEST(EmitReportTest, ImpossibleConditionRowIsUndefined) {
  const RunOutcome out =
      evcomb::Run("prop A\nprop B\nobs A : 1 / 2\nbound 0 <= P(B) <= 0\nquery P(A | B)\n", RunOptions{});
  ASSERT_EQ(out.exit_code, 0);
  ASSERT_EQ(out.table.rows.size(), 1u);
  EXPECT_FALSE(out.table.rows[0].error.empty());
  const std::string text = EmitReport(out.table, ReportFormat::kText);
  EXPECT_NE(text.find("undefined (condition has probability 0)"), std::string::npos);
  const auto j = nlohmann::json::parse(EmitReport(out.table, ReportFormat::kJson));
  EXPECT_TRUE(j["queries"][0]["lo"].is_null());
  EXPECT_TRUE(j["queries"][0].contains("error"));
}

TEST(RunTest, ErrorOutcomes) {
  struct Case {
    const char* file;
    int exit_code;
    const char* status;
    std::size_t line;
  };
  for (const Case& c : {Case{"lone_conditional.ev", 3, "polynomiality_violation", 0},
                        Case{"contradiction.ev", 2, "contradiction", 0},
                        Case{"infeasible.ev", 2, "infeasible", 6}}) {
    SCOPED_TRACE(c.file);
    const RunOutcome out = evcomb::Run(ReadFile(DataPath(c.file)), RunOptions{});
    EXPECT_EQ(out.exit_code, c.exit_code);
    EXPECT_EQ(out.table.status, c.status);
    EXPECT_GT(out.table.error_line, 0u);
    if (c.line != 0) EXPECT_EQ(out.table.error_line, c.line);
    const auto j = nlohmann::json::parse(EmitReport(out.table, ReportFormat::kJson));
    EXPECT_EQ(j["status"], c.status);
    EXPECT_TRUE(j["queries"].empty());
  }
  const RunOutcome parse = evcomb::Run("prop A\nobs B : 1 / 2\n", RunOptions{});
  EXPECT_EQ(parse.exit_code, 1);
  EXPECT_EQ(parse.table.status, "parse_error");
  EXPECT_EQ(parse.table.error_line, 2u);
}

TEST(RunTest, IterationCapExitsNotConverged) {
  RunOptions options;
  options.solve.max_iterations = 1;
  const RunOutcome out = evcomb::Run(ReadFile(DataPath("poker_123.ev")), options);
  EXPECT_EQ(out.exit_code, 4);
  EXPECT_EQ(out.table.status, "not_converged");
}

TEST(SessionTest, AskAfterSolve) {
  Session s;
  s.Load(ReadFile(DataPath("poker_12.ev")));
  EXPECT_TRUE(s.loaded());
  EXPECT_FALSE(s.solved());
  EXPECT_THROW(s.Ask("P(A)"), Error);
  s.Solve({});
  EXPECT_TRUE(s.solved());
  const auto r = s.Ask("P(B | A)");
  EXPECT_NEAR(r.lo, 0.0, 1e-6);
  EXPECT_NEAR(r.hi, 0.125 / 0.3, 1e-6);
  EXPECT_THROW(s.Ask("P(C)"), ParseError);
}

// ---------------------------------------------------------------------------
// Goldens: published table values, two-sided tolerance 0.005.

TEST(GoldenTest, PokerTables) {
  for (const char* name : {"poker_12", "poker_123", "poker_1234"}) {
    SCOPED_TRACE(name);
    const RunOutcome out = evcomb::Run(ReadFile(DataPath(std::string(name) + ".ev")), RunOptions{});
    ASSERT_EQ(out.exit_code, 0);
    std::istringstream golden(
        ReadFile(std::string(EVCOMB_GOLDEN_DIR) + "/" + name + ".tsv"));
    std::string line;
    std::size_t row = 0;
    while (std::getline(golden, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream fields(line);
      std::string query;
      double lo = 0.0, hi = 0.0;
      std::getline(fields, query, '\t');
      fields >> lo >> hi;
      ASSERT_LT(row, out.table.rows.size());
      const QueryRow& got = out.table.rows[row++];
      EXPECT_EQ(got.text, query);
      EXPECT_NEAR(got.interval.lo, lo, 0.005) << query;
      EXPECT_NEAR(got.interval.hi, hi, 0.005) << query;
    }
    EXPECT_EQ(row, out.table.rows.size());
  }
}

}  // namespace
}  // namespace evcomb
