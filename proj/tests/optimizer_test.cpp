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

#include "evcomb/optimizer.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "evcomb/error.hpp"
#include "evcomb/evidence_file.hpp"
#include "test_support.hpp"

namespace evcomb {
namespace {

using testing::Atoms;
using testing::ToLabeled;

const Formula kA = Formula::Var(0);
const Formula kB = Formula::Var(1);
const Formula kTrue = Formula::Constant(true);

CompiledModel Poker(int statements) {
  KnowledgeBase kb(Atoms({"A", "B"}));
  kb.AddExperiment({kA, kTrue, 9, 30, 1});
  kb.AddExperiment({kB, kTrue, 5, 40, 2});
  if (statements >= 3) kb.AddExperiment({kB, kA, 5, 6, 3});
  if (statements >= 4) kb.AddExperiment({kB, kTrue, 0, 200, 4});
  return kb.Compile();
}

CompiledModel LoadModel(const std::string& name) {
  const EvidenceFile file = ParseEvidence(testing::ReadFile(testing::DataPath(name)));
  return BuildKnowledgeBase(file).Compile();
}

double Prob(const Formula& f, const Jdv& j, std::size_t n_atoms = 2) {
  return ProbOf(ObservationVector::FromFormula(f, n_atoms), j);
}

TEST(FindInteriorPointTest, StrictlyInsideWithoutBounds) {
  const auto p = FindInteriorPoint(FeasiblePolytope::FromModel(Poker(2)));
  EXPECT_TRUE(p.interior);
  EXPECT_GT(p.min_slack, 0.0);
  EXPECT_TRUE(IsValidJdv(p.point));
  for (double x : p.point) EXPECT_GT(x, 0.0);
}

TEST(FindInteriorPointTest, RespectsBoundsAndAxioms) {
  KnowledgeBase kb(Atoms({"A", "B"}));
  kb.AddAxiom({Formula::Implies(kB, kA)});
  kb.AddInterval({kA, 0.1, 0.2});
  const auto p = FindInteriorPoint(FeasiblePolytope::FromModel(kb.Compile()));
  EXPECT_TRUE(p.interior);
  EXPECT_TRUE(IsValidJdv(p.point));
  EXPECT_EQ(p.point[2], 0.0);
  EXPECT_GT(Prob(kA, p.point), 0.1);
  EXPECT_LT(Prob(kA, p.point), 0.2);
}

TEST(FindInteriorPointTest, PinnedBoundHasNoStrictInterior) {
  KnowledgeBase kb(Atoms({"A"}));
  kb.AddInterval({kA, 0.0, 0.0});
  const auto p = FindInteriorPoint(FeasiblePolytope::FromModel(kb.Compile()));
  EXPECT_FALSE(p.interior);
  EXPECT_NEAR(p.point[1], 0.0, 1e-12);
}

TEST(FindInteriorPointTest, EmptySetThrows) {
  KnowledgeBase kb(Atoms({"A"}));
  kb.AddInterval({kA, 0.0, 0.2});
  kb.AddInterval({kA, 0.3, 1.0});
  try {
    FindInteriorPoint(FeasiblePolytope::FromModel(kb.Compile()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(MaximizeTest, TwoUnconditionalExperimentsPinTheMarginals) {
  const auto r = Maximize(Poker(2));
  ASSERT_TRUE(r.converged()) << r.message;
  EXPECT_NEAR(Prob(kA, r.jstar), 0.3, 1e-8);
  EXPECT_NEAR(Prob(kB, r.jstar), 0.125, 1e-8);
  EXPECT_NEAR(r.value, 9 * std::log(0.3) + 21 * std::log(0.7) + 5 * std::log(0.125) +
                           35 * std::log(0.875),
              1e-9);
  EXPECT_LE(r.stationarity_gap, 1e-9 * (1 + std::abs(r.value)));
}

TEST(MaximizeTest, ConditionalExperimentSelectsAPoint) {
  const auto r = Maximize(Poker(3));
  ASSERT_TRUE(r.converged()) << r.message;
  const auto j = ToLabeled(r.jstar);
  EXPECT_NEAR(j[0], 4.0 / 23.0, 1e-6);
  EXPECT_NEAR(j[1], 0.24 - 4.0 / 23.0, 1e-6);
  EXPECT_NEAR(j[2], 0.0, 1e-6);
  EXPECT_NEAR(j[3], 0.76, 1e-6);
}

TEST(MaximizeTest, FourStatements) {
  const auto r = Maximize(Poker(4));
  ASSERT_TRUE(r.converged()) << r.message;
  const auto j = ToLabeled(r.jstar);
  EXPECT_NEAR(j[0], 0.0396257, 2e-6);
  EXPECT_NEAR(j[1], 0.130458, 2e-6);
  EXPECT_NEAR(j[2], 0.0, 1e-6);
  EXPECT_NEAR(j[3], 0.829917, 2e-6);
}

TEST(MaximizeTest, NoExperimentsConvergesImmediately) {
  KnowledgeBase kb(Atoms({"A", "B"}));
  const auto r = Maximize(kb.Compile());
  ASSERT_TRUE(r.converged());
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(IsValidJdv(r.jstar));
}

TEST(MaximizeTest, IterationCapReportsNotConverged) {
  SolveOptions options;
  options.max_iterations = 1;
  const auto r = Maximize(Poker(3), options);
  EXPECT_EQ(r.status, SolveStatus::kNotConverged);
  EXPECT_FALSE(r.converged());
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_STREQ(SolveStatusName(r.status), "not_converged");
}

TEST(MaximizeTest, InfeasibleBoundsNameTheirLine) {
  KnowledgeBase kb(Atoms({"A"}));
  kb.AddExperiment({kA, kTrue, 1, 2, 1});
  kb.AddInterval({kA, 0.0, 0.2, 2});
  kb.AddInterval({kA, 0.3, 1.0, 3});
  const auto r = Maximize(kb.Compile());
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
  EXPECT_EQ(r.source_line, 3u);
}

TEST(MaximizeTest, BoundsForcingAnObservedEventToZero) {
  KnowledgeBase kb(Atoms({"A", "B"}));
  kb.AddExperiment({kA, kTrue, 3, 10, 1});
  kb.AddInterval({Formula::Iff(kA, kB), 1.0, 1.0, 2});
  kb.AddInterval({kB, 0.0, 0.0, 3});
  kb.AddInterval({kB, 0.0, 0.5, 4});
  const auto r = Maximize(kb.Compile());
  EXPECT_EQ(r.status, SolveStatus::kContradiction);
  EXPECT_EQ(r.source_line, 3u);
}

TEST(MaximizeTest, ActiveBoundsHoldAtTheOptimum) {
  const auto m = LoadModel("coin.ev");
  const auto r = Maximize(m);
  ASSERT_TRUE(r.converged()) << r.message;
  const Formula heads = Formula::Var(0), joe = Formula::Var(1);
  EXPECT_NEAR(Prob(heads, r.jstar), 0.5, 1e-9);
  EXPECT_NEAR(Prob(joe, r.jstar), 0.7, 1e-6);
  EXPECT_GE(Prob(Formula::And(heads, joe), r.jstar), 0.3 - 1e-9);
  EXPECT_LE(Prob(Formula::And(heads, joe), r.jstar), 0.4 + 1e-9);
}

TEST(MaximizeTest, SeedsChangeTheStartButNotTheOptimum) {
  const auto m = Poker(2);
  const auto base = Maximize(m);
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    SolveOptions options;
    options.seed = seed;
    const auto r = Maximize(m, options);
    ASSERT_TRUE(r.converged());
    EXPECT_NEAR(r.value, base.value, 1e-9 * (1 + std::abs(base.value)));
    EXPECT_NEAR(Prob(kA, r.jstar), 0.3, 1e-7);
    EXPECT_NEAR(Prob(kB, r.jstar), 0.125, 1e-7);
  }
}

TEST(MaximizePropertyTest, NoRandomFeasiblePointDoesBetter) {
  std::mt19937_64 rng(41);
  int points = 0;
  for (int model = 0; model < 10; ++model) {
    KnowledgeBase kb = testing::RandomKnowledgeBase(rng, 1 + model % 4, 5);
    const CompiledModel m = kb.Compile();
    const auto r = Maximize(m);
    ASSERT_TRUE(r.converged()) << r.message;
    for (int k = 0; k < 100; ++k) {
      const Jdv j = testing::RandomJdv(rng, m.dimension(), testing::AllWorlds(m.dimension()));
      ASSERT_LE(LogLikelihood(m, j), r.value + 1e-9 * (1 + std::abs(r.value)));
      ++points;
    }
  }
  EXPECT_EQ(points, 1000);
}

TEST(MaximizePropertyTest, FreshAtomEstimateIsTheObservedFrequency) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> trials(1, 500);
  for (int pair = 0; pair < 50; ++pair) {
    const std::uint64_t m = trials(rng);
    const std::uint64_t n =
        pair == 0 ? 0 : pair == 1 ? m : std::uniform_int_distribution<std::uint64_t>(0, m)(rng);
    KnowledgeBase kb(Atoms({"B", "C", "X"}));
    kb.AddExperiment({Formula::Or(kB, Formula::Var(0)), kTrue, 3, 7});
    kb.AddExperiment({Formula::Var(0), kTrue, 2, 9});
    kb.AddExperiment({Formula::Var(2), kTrue, n, m});
    const auto r = Maximize(kb.Compile());
    ASSERT_TRUE(r.converged()) << n << "/" << m << ": " << r.message << " gap "
                               << r.stationarity_gap << " value " << r.value;
    EXPECT_NEAR(Prob(Formula::Var(2), r.jstar, 3),
                static_cast<double>(n) / static_cast<double>(m), 1e-6)
        << n << "/" << m;
  }
}

Formula Rename(const Formula& g, const std::vector<AtomId>& perm) {
  switch (g.connective()) {
    case Connective::kConstant: return g;
    case Connective::kAtom: return Formula::Var(perm[g.atom()]);
    case Connective::kNot: return Formula::Not(Rename(g.lhs(), perm));
    case Connective::kAnd: return Formula::And(Rename(g.lhs(), perm), Rename(g.rhs(), perm));
    case Connective::kOr: return Formula::Or(Rename(g.lhs(), perm), Rename(g.rhs(), perm));
    case Connective::kImplies:
      return Formula::Implies(Rename(g.lhs(), perm), Rename(g.rhs(), perm));
    case Connective::kIff: return Formula::Iff(Rename(g.lhs(), perm), Rename(g.rhs(), perm));
  }
  return g;
}

TEST(MaximizePropertyTest, RelabelingAtomsPermutesTheOptimum) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    KnowledgeBase kb = testing::RandomKnowledgeBase(rng, n, 5);
    std::vector<AtomId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    KnowledgeBase renamed(kb.registry());
    for (const Experiment& e : kb.experiments()) {
      renamed.AddExperiment({Rename(e.event, perm), Rename(e.condition, perm),
                             e.successes, e.trials});
    }
    const CompiledModel m1 = kb.Compile();
    const CompiledModel m2 = renamed.Compile();
    const auto r1 = Maximize(m1);
    const auto r2 = Maximize(m2);
    ASSERT_TRUE(r1.converged() && r2.converged());
    EXPECT_NEAR(r1.value, r2.value, 1e-9 * (1 + std::abs(r1.value)));
    for (const Experiment& e : kb.experiments()) {
      if (!e.condition.IsConstantTrue()) continue;
      // Observed probabilities are unique at the optimum.
      const double p1 = Prob(e.event, r1.jstar, n);
      const double p2 = Prob(Rename(e.event, perm), r2.jstar, n);
      EXPECT_NEAR(p1, p2, 1e-6);
    }
  }
}

// Exhaustive grid over the 2-atom simplex at resolution 1/400.
void ExpectGridCannotBeat(const CompiledModel& m) {
  const auto r = Maximize(m);
  ASSERT_TRUE(r.converged()) << r.message;
  constexpr int kSteps = 400;
  double best = -std::numeric_limits<double>::infinity();
  Jdv j(4);
  for (int a = 0; a <= kSteps; ++a) {
    for (int b = 0; a + b <= kSteps; ++b) {
      for (int c = 0; a + b + c <= kSteps; ++c) {
        j[0] = static_cast<double>(a) / kSteps;
        j[1] = static_cast<double>(b) / kSteps;
        j[2] = static_cast<double>(c) / kSteps;
        j[3] = static_cast<double>(kSteps - a - b - c) / kSteps;
        bool feasible = true;
        for (std::size_t w = 0; w < 4; ++w) feasible = feasible && !(m.IsZeroed(w) && j[w] > 0);
        for (const LinearConstraint& c : m.constraints()) {
          const double p = ProbOf(c.observation, j);
          feasible = feasible && p >= c.lo - 1e-12 && p <= c.hi + 1e-12;
        }
        if (!feasible) continue;
        best = std::max(best, LogLikelihood(m, j));
      }
    }
  }
  EXPECT_LE(best, r.value + 1e-3);
  EXPECT_GT(best, r.value - 1.0);
}

TEST(MaximizeOracleTest, GridSearchOnShippedModels) {
  for (const char* name : {"poker_12.ev", "poker_123.ev", "poker_1234.ev", "coin.ev"}) {
    SCOPED_TRACE(name);
    ExpectGridCannotBeat(LoadModel(name));
  }
}

}  // namespace
}  // namespace evcomb
