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

#include "evcomb/lp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>

namespace evcomb {
namespace {

// Worlds (a, b, c, d) with P(A) = a + b = 0.3 and P(B) = a + c = 0.125.
LinearProgram PokerFace(std::vector<double> objective) {
  LinearProgram lp;
  lp.num_variables = 4;
  lp.objective = std::move(objective);
  lp.AddRow({1, 1, 1, 1}, Relation::kEqual, 1.0);
  lp.AddRow({1, 1, 0, 0}, Relation::kEqual, 0.3);
  lp.AddRow({1, 0, 1, 0}, Relation::kEqual, 0.125);
  return lp;
}

TEST(SolveLpTest, BoundsOfTheJointCell) {
  const auto hi = SolveLp(PokerFace({1, 0, 0, 0}), Sense::kMaximize);
  ASSERT_EQ(hi.status, LpStatus::kOptimal);
  EXPECT_NEAR(hi.value, 0.125, 1e-12);
  const auto lo = SolveLp(PokerFace({1, 0, 0, 0}), Sense::kMinimize);
  ASSERT_EQ(lo.status, LpStatus::kOptimal);
  EXPECT_NEAR(lo.value, 0.0, 1e-12);
  double sum = 0.0;
  for (double x : hi.point) {
    EXPECT_GE(x, -1e-12);
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(SolveLpTest, ContradictoryBoundsAreInfeasible) {
  LinearProgram lp;
  lp.num_variables = 2;
  lp.objective = {1, 0};
  lp.AddRow({1, 1}, Relation::kEqual, 1.0);
  lp.AddRow({1, 0}, Relation::kLessEqual, 0.2);
  lp.AddRow({1, 0}, Relation::kGreaterEqual, 0.3);
  EXPECT_EQ(SolveLp(lp, Sense::kMaximize).status, LpStatus::kInfeasible);
}

TEST(SolveLpTest, UnboundedObjective) {
  LinearProgram lp;
  lp.num_variables = 2;
  lp.objective = {1, 1};
  lp.AddRow({1, -1}, Relation::kLessEqual, 1.0);
  EXPECT_EQ(SolveLp(lp, Sense::kMaximize).status, LpStatus::kUnbounded);
  EXPECT_EQ(SolveLp(lp, Sense::kMinimize).status, LpStatus::kOptimal);
}

TEST(SolveLpTest, BealeCyclingExampleTerminates) {
  LinearProgram lp;
  lp.num_variables = 4;
  lp.objective = {-0.75, 20, -0.5, 6};
  lp.AddRow({0.25, -8, -1, 9}, Relation::kLessEqual, 0.0);
  lp.AddRow({0.5, -12, -0.5, 3}, Relation::kLessEqual, 0.0);
  lp.AddRow({0, 0, 1, 0}, Relation::kLessEqual, 1.0);
  const auto s = SolveLp(lp, Sense::kMinimize);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, -1.25, 1e-12);
  EXPECT_NEAR(s.point[0], 1.0, 1e-12);
  EXPECT_NEAR(s.point[2], 1.0, 1e-12);
}

TEST(SolveLpTest, RedundantAndDegenerateRows) {
  LinearProgram lp = PokerFace({0, 1, 0, 0});
  lp.AddRow({1, 1, 1, 1}, Relation::kEqual, 1.0);
  lp.AddRow({0, 0, 1, 1}, Relation::kEqual, 0.7);
  lp.AddRow({2, 2, 0, 0}, Relation::kEqual, 0.6);
  lp.AddRow({1, 0, 0, 0}, Relation::kGreaterEqual, 0.0);
  const auto s = SolveLp(lp, Sense::kMaximize);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, 0.3, 1e-12);
}

TEST(SolveLpTest, NegativeRightHandSides) {
  LinearProgram lp;
  lp.num_variables = 2;
  lp.objective = {1, 2};
  lp.AddRow({-1, -1}, Relation::kLessEqual, -1.0);
  lp.AddRow({1, 0}, Relation::kLessEqual, 3.0);
  lp.AddRow({0, -1}, Relation::kGreaterEqual, -2.0);
  const auto s = SolveLp(lp, Sense::kMinimize);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
  EXPECT_EQ(SolveLp(lp, Sense::kMaximize).value, 7.0);
}

TEST(SolveLpTest, MalformedProgramsThrow) {
  LinearProgram lp;
  lp.num_variables = 2;
  lp.objective = {1};
  EXPECT_ANY_THROW(SolveLp(lp, Sense::kMinimize));
  lp.objective = {1, 1};
  lp.AddRow({1}, Relation::kLessEqual, 1.0);
  EXPECT_ANY_THROW(SolveLp(lp, Sense::kMinimize));
}

// Oracle: enumerate every basic solution of a tiny program by choosing which
// inequalities are tight, solving by Gaussian elimination.
std::optional<std::vector<double>> SolveSquare(std::vector<std::vector<double>> a,
                                               std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-12) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

std::optional<double> VertexOracle(const LinearProgram& lp, Sense sense) {
  const std::size_t n = lp.num_variables;
  // Every constraint as a . x <= b (equalities split), plus x >= 0.
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (const auto& row : lp.rows) {
    if (row.relation != Relation::kGreaterEqual) {
      a.push_back(row.coefficients);
      b.push_back(row.rhs);
    }
    if (row.relation != Relation::kLessEqual) {
      std::vector<double> neg(row.coefficients);
      for (double& v : neg) v = -v;
      a.push_back(neg);
      b.push_back(-row.rhs);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = -1.0;
    a.push_back(e);
    b.push_back(0.0);
  }
  std::optional<double> best;
  const std::size_t m = a.size();
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t depth,
                                                             std::size_t from) {
    if (depth == n) {
      std::vector<std::vector<double>> sa;
      std::vector<double> sb;
      for (std::size_t k : pick) {
        sa.push_back(a[k]);
        sb.push_back(b[k]);
      }
      const auto x = SolveSquare(sa, sb);
      if (!x) return;
      for (std::size_t r = 0; r < m; ++r) {
        double lhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) lhs += a[r][i] * (*x)[i];
        if (lhs > b[r] + 1e-9) return;
      }
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += lp.objective[i] * (*x)[i];
      if (!best || (sense == Sense::kMaximize ? v > *best : v < *best)) best = v;
      return;
    }
    for (std::size_t k = from; k < m; ++k) {
      pick[depth] = k;
      choose(depth + 1, k + 1);
    }
  };
  choose(0, 0);
  return best;
}

TEST(SolveLpPropertyTest, AgreesWithVertexEnumeration) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> rel(0, 4);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    LinearProgram lp;
    lp.num_variables = 2 + trial % 2;
    for (std::size_t i = 0; i < lp.num_variables; ++i) lp.objective.push_back(coef(rng));
    // A box keeps the program bounded.
    std::vector<double> ones(lp.num_variables, 1.0);
    lp.AddRow(ones, Relation::kLessEqual, 10.0);
    const int extra = 1 + trial % 4;
    for (int r = 0; r < extra; ++r) {
      std::vector<double> c;
      for (std::size_t i = 0; i < lp.num_variables; ++i) c.push_back(coef(rng));
      const int k = rel(rng);
      const Relation relation = k < 2 ? Relation::kLessEqual
                                : k < 4 ? Relation::kGreaterEqual
                                        : Relation::kEqual;
      lp.AddRow(c, relation, coef(rng));
    }
    for (Sense sense : {Sense::kMinimize, Sense::kMaximize}) {
      const auto oracle = VertexOracle(lp, sense);
      const auto s = SolveLp(lp, sense);
      if (!oracle) {
        ASSERT_EQ(s.status, LpStatus::kInfeasible) << "trial " << trial;
        ++infeasible;
      } else {
        ASSERT_EQ(s.status, LpStatus::kOptimal) << "trial " << trial;
        ASSERT_NEAR(s.value, *oracle, 1e-9 * (1 + std::abs(*oracle)));
        ++optimal;
      }
    }
  }
  EXPECT_GT(optimal, 100);
  EXPECT_GT(infeasible, 10);
}

// Thin slabs like the ones pinning observed probabilities around an optimum.
TEST(SolveLpPropertyTest, ThinSlabsStayFeasible) {
  std::mt19937_64 rng(32);
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution bit(0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + trial % 5;
    std::vector<double> x(n);
    double sum = 0.0;
    for (double& v : x) sum += (v = e(rng));
    for (double& v : x) v /= sum;
    LinearProgram lp;
    lp.num_variables = n;
    lp.AddRow(std::vector<double>(n, 1.0), Relation::kEqual, 1.0);
    for (int r = 0; r < 6; ++r) {
      std::vector<double> row(n);
      double p = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        row[k] = bit(rng) ? 1.0 : 0.0;
        p += row[k] * x[k];
      }
      lp.AddRow(row, Relation::kGreaterEqual, p - 1e-8);
      lp.AddRow(row, Relation::kLessEqual, p + 1e-8);
    }
    for (std::size_t k = 0; k < n; ++k) lp.objective.push_back(bit(rng) ? 1.0 : 0.0);
    for (Sense sense : {Sense::kMinimize, Sense::kMaximize}) {
      const auto s = SolveLp(lp, sense);
      ASSERT_EQ(s.status, LpStatus::kOptimal);
      double value = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        ASSERT_GE(s.point[k], 0.0);
        value += lp.objective[k] * x[k];
      }
      for (const auto& row : lp.rows) {
        double lhs = 0.0;
        for (std::size_t k = 0; k < n; ++k) lhs += row.coefficients[k] * s.point[k];
        if (row.relation != Relation::kLessEqual) ASSERT_GE(lhs, row.rhs - 1e-12);
        if (row.relation != Relation::kGreaterEqual) ASSERT_LE(lhs, row.rhs + 1e-12);
      }
      // x itself is feasible, so it bounds the optimum.
      if (sense == Sense::kMinimize) {
        ASSERT_LE(s.value, value + 1e-12);
      } else {
        ASSERT_GE(s.value, value - 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace evcomb
