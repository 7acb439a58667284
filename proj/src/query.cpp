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

#include "evcomb/query.hpp"

#include <algorithm>

#include "evcomb/error.hpp"
#include "evcomb/linalg.hpp"
#include "evcomb/lp.hpp"

namespace evcomb {

MaximizerPolytope BuildMaximizerPolytope(const CompiledModel& model,
                                         const SolveResult& result,
                                         double band) {
  if (!result.converged()) {
    throw Error(ErrorKind::kInvalidArgument,
                "maximizer set requires a converged solve");
  }
  MaximizerPolytope mp;
  mp.n_atoms = model.n_atoms();
  mp.polytope = FeasiblePolytope::FromModel(model);
  mp.first_pinned = mp.polytope.constraints.size();
  mp.jstar = result.jstar;
  for (const Term& term : model.terms()) {
    const double p = ProbOf(term.observation, result.jstar);
    mp.polytope.constraints.push_back(LinearConstraint{
        term.observation, std::max(0.0, p - band), std::min(1.0, p + band), 0});
  }
  return mp;
}

std::vector<std::vector<double>> NullSpaceBasis(const CompiledModel& model) {
  const auto live = model.live_worlds();
  DenseMatrix m(model.terms().size(), live.size());
  for (std::size_t i = 0; i < model.terms().size(); ++i) {
    for (std::size_t k = 0; k < live.size(); ++k) {
      m(i, k) = model.terms()[i].observation[live[k]] ? 1.0 : 0.0;
    }
  }
  std::vector<std::vector<double>> out;
  for (const auto& v : OrthonormalNullSpace(m)) {
    std::vector<double> full(model.dimension(), 0.0);
    for (std::size_t k = 0; k < live.size(); ++k) full[live[k]] = v[k];
    out.push_back(std::move(full));
  }
  return out;
}

namespace {

std::vector<double> OnLive(const FeasiblePolytope& p,
                           const ObservationVector& observation) {
  if (observation.size() != p.dimension) {
    throw Error(ErrorKind::kInvalidArgument,
                "query dimension does not match the model");
  }
  std::vector<double> v(p.live.size());
  for (std::size_t k = 0; k < p.live.size(); ++k) {
    v[k] = observation[p.live[k]] ? 1.0 : 0.0;
  }
  return v;
}

constexpr double kWellScaledDenominator = 1e-6;

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

ProbabilityInterval Finish(double lo, double hi) {
  ProbabilityInterval out;
  out.lo = Clamp01(lo);
  out.hi = Clamp01(std::max(lo, hi));
  out.degenerate = out.hi - out.lo <= kDegenerateWidth;
  return out;
}

double Optimize(const LinearProgram& lp, Sense sense) {
  const LpSolution s = SolveLp(lp, sense);
  if (s.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kInfeasible,
                std::string("interval program is ") + LpStatusName(s.status));
  }
  return s.value;
}

// Charnes-Cooper: y = t x with den . y = 1 and every row homogenized.
LinearProgram CharnesCooper(const FeasiblePolytope& p,
                            const ObservationVector& num_ov,
                            const ObservationVector& den_ov) {
  const std::size_t n = p.live.size();
  const std::size_t scale = n;  // column of the homogenizing variable

  LinearProgram lp;
  lp.num_variables = n + 1;
  lp.objective = OnLive(p, num_ov);
  lp.objective.push_back(0.0);

  std::vector<double> sum(n + 1, 1.0);
  sum[scale] = -1.0;
  lp.AddRow(std::move(sum), Relation::kEqual, 0.0);
  for (const LinearConstraint& c : p.constraints) {
    std::vector<double> row = OnLive(p, c.observation);
    row.push_back(0.0);
    if (c.lo == c.hi) {
      row[scale] = -c.lo;
      lp.AddRow(std::move(row), Relation::kEqual, 0.0);
      continue;
    }
    if (c.lo > 0.0) {
      row[scale] = -c.lo;
      lp.AddRow(row, Relation::kGreaterEqual, 0.0);
    }
    if (c.hi < 1.0) {
      row[scale] = -c.hi;
      lp.AddRow(std::move(row), Relation::kLessEqual, 0.0);
    }
  }
  std::vector<double> normalize = OnLive(p, den_ov);
  normalize.push_back(0.0);
  lp.AddRow(std::move(normalize), Relation::kEqual, 1.0);
  return lp;
}

// Dinkelbach's parametric method on the original polytope. Used when the
// denominator can come close to zero, where the homogenized program is badly
// scaled.
double Dinkelbach(const FeasiblePolytope& p, const std::vector<double>& num,
                  const std::vector<double>& den, Sense sense) {
  auto ratio_at = [&](const std::vector<double>& x) {
    double n = 0.0, d = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      n += num[k] * x[k];
      d += den[k] * x[k];
    }
    return n / d;
  };
  const LpSolution start = SolveLp(p.MakeLp(den), Sense::kMaximize);
  if (start.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kInfeasible,
                std::string("interval program is ") + LpStatusName(start.status));
  }
  double lambda = ratio_at(start.point);
  constexpr int kMaxRounds = 200;
  std::vector<double> objective(num.size());
  for (int round = 0; round < kMaxRounds; ++round) {
    for (std::size_t k = 0; k < num.size(); ++k) {
      objective[k] = num[k] - lambda * den[k];
    }
    const LpSolution s = SolveLp(p.MakeLp(objective), sense);
    if (s.status != LpStatus::kOptimal) {
      throw Error(ErrorKind::kInfeasible,
                  std::string("interval program is ") + LpStatusName(s.status));
    }
    const bool improves = sense == Sense::kMaximize ? s.value > 1e-13 : s.value < -1e-13;
    if (!improves) break;
    const double next = ratio_at(s.point);
    if (sense == Sense::kMaximize ? next <= lambda : next >= lambda) break;
    lambda = next;
  }
  return lambda;
}

}  // namespace

ProbabilityInterval ProbInterval(const MaximizerPolytope& mp,
                                 const ObservationVector& observation) {
  const LinearProgram lp = mp.polytope.MakeLp(OnLive(mp.polytope, observation));
  return Finish(Optimize(lp, Sense::kMinimize), Optimize(lp, Sense::kMaximize));
}

ProbabilityInterval ProbInterval(const MaximizerPolytope& mp,
                                 const Formula& formula) {
  return ProbInterval(mp, ObservationVector::FromFormula(formula, mp.n_atoms));
}

ProbabilityInterval ConditionalInterval(const MaximizerPolytope& mp,
                                        const Formula& event,
                                        const Formula& condition) {
  const auto den_ov = ObservationVector::FromFormula(condition, mp.n_atoms);
  const ProbabilityInterval den = ProbInterval(mp, den_ov);
  if (den.hi <= kZeroProbability) {
    throw Error(ErrorKind::kImpossibleCondition,
                "condition has probability 0 under every maximum-likelihood "
                "distribution");
  }
  const auto num_ov = ObservationVector::FromFormula(
      Formula::And(condition, event), mp.n_atoms);
  const FeasiblePolytope& p = mp.polytope;
  ProbabilityInterval out;
  if (den.lo >= kWellScaledDenominator) {
    const LinearProgram lp = CharnesCooper(p, num_ov, den_ov);
    out = Finish(Optimize(lp, Sense::kMinimize), Optimize(lp, Sense::kMaximize));
  } else {
    const auto num = OnLive(p, num_ov);
    const auto den_row = OnLive(p, den_ov);
    out = Finish(Dinkelbach(p, num, den_row, Sense::kMinimize),
                 Dinkelbach(p, num, den_row, Sense::kMaximize));
  }
  out.open_endpoint = den.lo <= kZeroProbability;
  return out;
}

}  // namespace evcomb
