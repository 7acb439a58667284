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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "evcomb/error.hpp"
#include "evcomb/linalg.hpp"

namespace evcomb {

const char* SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kContradiction: return "contradiction";
    case SolveStatus::kNotConverged: return "not_converged";
  }
  return "unknown";
}

FeasiblePolytope FeasiblePolytope::FromModel(const CompiledModel& model) {
  FeasiblePolytope p;
  p.dimension = model.dimension();
  p.live.assign(model.live_worlds().begin(), model.live_worlds().end());
  p.constraints.assign(model.constraints().begin(), model.constraints().end());
  return p;
}

void FeasiblePolytope::AppendRows(LinearProgram& lp) const {
  const std::size_t width = lp.num_variables;
  std::vector<double> ones(width, 0.0);
  std::fill(ones.begin(), ones.begin() + static_cast<std::ptrdiff_t>(live.size()), 1.0);
  lp.AddRow(std::move(ones), Relation::kEqual, 1.0);
  for (const LinearConstraint& c : constraints) {
    std::vector<double> row(width, 0.0);
    for (std::size_t k = 0; k < live.size(); ++k) {
      row[k] = c.observation[live[k]] ? 1.0 : 0.0;
    }
    if (c.lo == c.hi) {
      lp.AddRow(std::move(row), Relation::kEqual, c.lo);
      continue;
    }
    if (c.lo > 0.0) lp.AddRow(row, Relation::kGreaterEqual, c.lo);
    if (c.hi < 1.0) lp.AddRow(std::move(row), Relation::kLessEqual, c.hi);
  }
}

LinearProgram FeasiblePolytope::MakeLp(std::span<const double> objective) const {
  LinearProgram lp;
  lp.num_variables = live.size();
  lp.objective.assign(objective.begin(), objective.end());
  AppendRows(lp);
  return lp;
}

Jdv FeasiblePolytope::Expand(std::span<const double> live_values) const {
  Jdv jdv(dimension, 0.0);
  for (std::size_t k = 0; k < live.size(); ++k) jdv[live[k]] = live_values[k];
  return jdv;
}

namespace {

constexpr double kInteriorTolerance = 1e-9;

// a . x = b or a . x >= b over the worlds of a Face.
struct Row {
  std::vector<double> a;
  double b = 0.0;
};

// A face of the feasible polytope: the worlds still allowed to be positive,
// plus equality and inequality rows over those worlds. Nonnegativity of each
// world is implicit.
struct Face {
  std::vector<std::size_t> worlds;
  std::vector<Row> equalities;
  std::vector<Row> inequalities;
};

Face InitialFace(const FeasiblePolytope& p) {
  Face face;
  face.worlds = p.live;
  const std::size_t n = p.live.size();
  face.equalities.push_back(Row{std::vector<double>(n, 1.0), 1.0});
  for (const LinearConstraint& c : p.constraints) {
    std::vector<double> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = c.observation[p.live[k]] ? 1.0 : 0.0;
    if (c.lo == c.hi) {
      face.equalities.push_back(Row{a, c.lo});
      continue;
    }
    if (c.lo > 0.0) face.inequalities.push_back(Row{a, c.lo});
    if (c.hi < 1.0) {
      for (double& v : a) v = -v;
      face.inequalities.push_back(Row{std::move(a), -c.hi});
    }
  }
  return face;
}

std::vector<double> Padded(const std::vector<double>& a, std::size_t width) {
  std::vector<double> row(width, 0.0);
  std::copy(a.begin(), a.end(), row.begin());
  return row;
}

void AppendFaceRows(const Face& face, LinearProgram& lp) {
  for (const Row& r : face.equalities) {
    lp.AddRow(Padded(r.a, lp.num_variables), Relation::kEqual, r.b);
  }
  for (const Row& r : face.inequalities) {
    lp.AddRow(Padded(r.a, lp.num_variables), Relation::kGreaterEqual, r.b);
  }
}

// max s  s.t. face rows, x_w >= s, a . x - b >= s.
LpSolution MaxSlack(const Face& face) {
  const std::size_t n = face.worlds.size();
  LinearProgram lp;
  lp.num_variables = n + 1;
  lp.objective.assign(n + 1, 0.0);
  lp.objective[n] = 1.0;
  for (const Row& r : face.equalities) {
    lp.AddRow(Padded(r.a, n + 1), Relation::kEqual, r.b);
  }
  for (const Row& r : face.inequalities) {
    auto row = Padded(r.a, n + 1);
    row[n] = -1.0;
    lp.AddRow(std::move(row), Relation::kGreaterEqual, r.b);
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> row(n + 1, 0.0);
    row[k] = 1.0;
    row[n] = -1.0;
    lp.AddRow(std::move(row), Relation::kGreaterEqual, 0.0);
  }
  std::vector<double> cap(n + 1, 0.0);
  cap[n] = 1.0;
  lp.AddRow(std::move(cap), Relation::kLessEqual, 1.0);
  return SolveLp(lp, Sense::kMaximize);
}

LpSolution MaxOverFace(const Face& face, std::vector<double> objective) {
  LinearProgram lp;
  lp.num_variables = face.worlds.size();
  lp.objective = std::move(objective);
  AppendFaceRows(face, lp);
  return SolveLp(lp, Sense::kMaximize);
}

Face DropWorlds(const Face& face, const std::vector<bool>& drop) {
  auto keep = [&](const std::vector<double>& a) {
    std::vector<double> out;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!drop[k]) out.push_back(a[k]);
    }
    return out;
  };
  Face out;
  for (std::size_t k = 0; k < face.worlds.size(); ++k) {
    if (!drop[k]) out.worlds.push_back(face.worlds[k]);
  }
  for (const Row& r : face.equalities) out.equalities.push_back(Row{keep(r.a), r.b});
  for (const Row& r : face.inequalities) {
    out.inequalities.push_back(Row{keep(r.a), r.b});
  }
  return out;
}

struct ReducedFace {
  Face face;
  std::vector<double> interior;  // per face world
};

// Finds the smallest face containing the whole polytope by turning every
// inequality that cannot be strictly satisfied into an equality. Returns
// nullopt when the polytope is empty.
std::optional<ReducedFace> Reduce(Face face) {
  for (int round = 0; round < 4; ++round) {
    const LpSolution slack = MaxSlack(face);
    if (slack.status != LpStatus::kOptimal) return std::nullopt;
    const std::size_t n = face.worlds.size();
    if (slack.point[n] > kInteriorTolerance) {
      return ReducedFace{std::move(face),
                         std::vector<double>(slack.point.begin(),
                                             slack.point.begin() +
                                                 static_cast<std::ptrdiff_t>(n))};
    }
    std::vector<bool> drop(n, false);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> e(n, 0.0);
      e[k] = 1.0;
      const LpSolution s = MaxOverFace(face, std::move(e));
      if (s.status != LpStatus::kOptimal) return std::nullopt;
      drop[k] = s.value <= kInteriorTolerance;
    }
    std::vector<Row> kept;
    for (Row& r : face.inequalities) {
      const LpSolution s = MaxOverFace(face, r.a);
      if (s.status != LpStatus::kOptimal) return std::nullopt;
      if (s.value - r.b <= kInteriorTolerance) {
        face.equalities.push_back(std::move(r));
      } else {
        kept.push_back(std::move(r));
      }
    }
    face.inequalities = std::move(kept);
    face = DropWorlds(face, drop);
    if (face.worlds.empty()) return std::nullopt;
  }
  return std::nullopt;
}

// Log-barrier formulation on a reduced face, in the coordinates
// x = x0 + Z y where the columns of Z span the null space of the equalities:
//   F_t(x) = t * sum_i k_i log(o_i . x) + sum_w log x_w + sum_j log(a_j . x - b_j).
// F_t is self-concordant, so damped Newton steps need no line search beyond
// keeping every logarithm's argument positive.
class BarrierSolver {
 public:
  BarrierSolver(const CompiledModel& model, const Face& face) {
    const std::size_t n = face.worlds.size();
    n_ = static_cast<Eigen::Index>(n);
    std::vector<std::vector<double>> rows;
    std::vector<double> exps;
    for (const Term& t : model.terms()) {
      std::vector<double> row(n);
      std::size_t covered = 0;
      for (std::size_t k = 0; k < n; ++k) {
        row[k] = t.observation[face.worlds[k]] ? 1.0 : 0.0;
        covered += t.observation[face.worlds[k]] ? 1 : 0;
      }
      if (covered == 0) {
        contradiction_ = true;
        continue;
      }
      if (covered == n) continue;  // probability identically 1 on this face
      rows.push_back(std::move(row));
      exps.push_back(static_cast<double>(t.exponent));
    }
    terms_.resize(static_cast<Eigen::Index>(rows.size()), n_);
    exponents_.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        terms_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
      }
      exponents_(static_cast<Eigen::Index>(i)) = exps[i];
    }
    ineq_.resize(static_cast<Eigen::Index>(face.inequalities.size()), n_);
    ineq_rhs_.resize(static_cast<Eigen::Index>(face.inequalities.size()));
    for (std::size_t j = 0; j < face.inequalities.size(); ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        ineq_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
            face.inequalities[j].a[k];
      }
      ineq_rhs_(static_cast<Eigen::Index>(j)) = face.inequalities[j].b;
    }
    DenseMatrix eq(face.equalities.size(), n);
    eq_.resize(static_cast<Eigen::Index>(face.equalities.size()), n_);
    for (std::size_t r = 0; r < face.equalities.size(); ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        eq(r, k) = face.equalities[r].a[k];
        eq_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
            face.equalities[r].a[k];
      }
    }
    const auto basis = OrthonormalNullSpace(eq);
    null_.resize(n_, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c) {
      for (std::size_t k = 0; k < n; ++k) {
        null_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = basis[c][k];
      }
    }
  }

  bool contradiction() const { return contradiction_; }
  bool has_freedom() const { return null_.cols() > 0; }
  double barrier_count() const {
    return static_cast<double>(n_ + ineq_.rows());
  }

  double Objective(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd s = terms_ * x;
    double f = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) f += exponents_(i) * std::log(s(i));
    return f;
  }

  bool StrictlyInside(const Eigen::VectorXd& x) const {
    if ((x.array() <= 0.0).any()) return false;
    if (terms_.rows() > 0 && ((terms_ * x).array() <= 0.0).any()) return false;
    if (ineq_.rows() > 0 && ((ineq_ * x - ineq_rhs_).array() <= 0.0).any()) {
      return false;
    }
    return true;
  }

  // One damped Newton step on F_t. Returns the squared Newton decrement
  // measured before the step, or a negative value if no step could be taken.
  // The step is computed in the scaled variables u = dx / x, which keeps the
  // system well conditioned when some coordinates approach zero.
  double NewtonStep(Eigen::VectorXd& x, double t) const {
    const Eigen::Index nt = terms_.rows();
    const Eigen::Index nj = ineq_.rows();
    // -Hessian = M^T M and gradient = M^T q, both with respect to u.
    Eigen::MatrixXd m(nt + n_ + nj, n_);
    Eigen::VectorXd q(nt + n_ + nj);
    const Eigen::VectorXd s = terms_ * x;
    for (Eigen::Index i = 0; i < nt; ++i) {
      const double w = std::sqrt(t * exponents_(i));
      m.row(i) = (w / s(i)) * terms_.row(i).cwiseProduct(x.transpose());
      q(i) = w;
    }
    m.middleRows(nt, n_).setIdentity();
    q.segment(nt, n_).setOnes();
    if (nj > 0) {
      const Eigen::VectorXd r = ineq_ * x - ineq_rhs_;
      for (Eigen::Index j = 0; j < nj; ++j) {
        m.row(nt + n_ + j) = ineq_.row(j).cwiseProduct(x.transpose()) / r(j);
        q(nt + n_ + j) = 1.0;
      }
    }
    const Eigen::MatrixXd z = ScaledNullSpace(x);
    if (z.cols() == 0) return 0.0;
    const Eigen::MatrixXd mz = m * z;
    const Eigen::VectorXd v = mz.colPivHouseholderQr().solve(q);
    const double decrement = q.dot(mz * v);
    if (!std::isfinite(decrement)) return -1.0;
    const Eigen::VectorXd u = z * v;
    const double lambda = std::sqrt(std::max(0.0, decrement));
    double alpha = lambda < 0.25 ? 1.0 : 1.0 / (1.0 + lambda);
    for (int halvings = 0; halvings < 60; ++halvings) {
      Eigen::VectorXd trial = x + alpha * x.cwiseProduct(u);
      if (StrictlyInside(trial)) {
        x = std::move(trial);
        return decrement;
      }
      alpha *= 0.5;
    }
    return -1.0;
  }

 private:
  // Orthonormal basis of {u : E diag(x) u = 0}.
  Eigen::MatrixXd ScaledNullSpace(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd ct = (eq_ * x.asDiagonal()).transpose();
    for (Eigen::Index c = 0; c < ct.cols(); ++c) {
      const double norm = ct.col(c).norm();
      if (norm > 0.0) ct.col(c) /= norm;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ct);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    const Eigen::MatrixXd q = qr.householderQ();
    return q.rightCols(n_ - rank);
  }

  Eigen::Index n_ = 0;
  Eigen::MatrixXd terms_;
  Eigen::VectorXd exponents_;
  Eigen::MatrixXd ineq_;
  Eigen::VectorXd ineq_rhs_;
  Eigen::MatrixXd eq_;
  Eigen::MatrixXd null_;
  bool contradiction_ = false;
};

void MoveTowardRandomVertex(const Face& face, std::uint64_t seed,
                            std::vector<double>& x) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> mix(0.05, 0.5);
  std::vector<double> objective(face.worlds.size());
  for (double& c : objective) c = normal(rng);
  const LpSolution vertex = MaxOverFace(face, std::move(objective));
  if (vertex.status != LpStatus::kOptimal) return;
  const double alpha = mix(rng);
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = (1.0 - alpha) * x[k] + alpha * vertex.point[k];
  }
}

}  // namespace

InteriorPoint FindInteriorPoint(const FeasiblePolytope& polytope) {
  const Face face = InitialFace(polytope);
  const LpSolution s = MaxSlack(face);
  if (s.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kInfeasible, "feasible set is empty");
  }
  const std::size_t n = face.worlds.size();
  InteriorPoint out;
  out.point = polytope.Expand(std::span(s.point).first(n));
  out.min_slack = s.point[n];
  out.interior = out.min_slack > kInteriorTolerance;
  return out;
}

double StationarityGap(const CompiledModel& model, std::span<const double> jdv) {
  const FeasiblePolytope polytope = FeasiblePolytope::FromModel(model);
  const std::vector<double> grad = LogLikelihoodGradient(model, jdv);
  std::vector<double> objective(polytope.live.size());
  double at_point = 0.0;
  for (std::size_t k = 0; k < polytope.live.size(); ++k) {
    objective[k] = grad[polytope.live[k]];
    at_point += objective[k] * jdv[polytope.live[k]];
  }
  const LpSolution best = SolveLp(polytope.MakeLp(objective), Sense::kMaximize);
  if (best.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kInfeasible, "feasible set is empty");
  }
  return std::max(0.0, best.value - at_point);
}

namespace {

// True when some term with a positive exponent vanishes on the face.
bool ZeroesObservedTerm(const CompiledModel& model, const Face& face) {
  for (const Term& t : model.terms()) {
    bool covered = false;
    for (std::size_t w : face.worlds) covered = covered || t.observation[w];
    if (!covered) return true;
  }
  return false;
}

// Line of the first constraint whose addition to its predecessors makes the
// polytope empty (or, with `zeroing`, zeroes an observed term).
std::size_t ImplicatedLine(const CompiledModel& model,
                           const FeasiblePolytope& polytope, bool zeroing) {
  FeasiblePolytope prefix = polytope;
  prefix.constraints.clear();
  for (const LinearConstraint& c : polytope.constraints) {
    prefix.constraints.push_back(c);
    const auto reduced = Reduce(InitialFace(prefix));
    if (!reduced) return c.source_line;
    if (zeroing && ZeroesObservedTerm(model, reduced->face)) return c.source_line;
  }
  return 0;
}

}  // namespace

SolveResult Maximize(const CompiledModel& model, const SolveOptions& options) {
  SolveResult result;
  const FeasiblePolytope polytope = FeasiblePolytope::FromModel(model);
  auto reduced = Reduce(InitialFace(polytope));
  if (!reduced) {
    result.status = SolveStatus::kInfeasible;
    result.message = "the probability bounds admit no joint distribution";
    result.source_line = ImplicatedLine(model, polytope, false);
    return result;
  }
  const Face& face = reduced->face;
  BarrierSolver barrier(model, face);
  if (barrier.contradiction()) {
    result.status = SolveStatus::kContradiction;
    result.message =
        "the probability bounds force an observed event to probability 0";
    result.source_line = ImplicatedLine(model, polytope, true);
    return result;
  }

  std::vector<double> start = reduced->interior;
  if (options.seed) MoveTowardRandomVertex(face, *options.seed, start);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
      start.data(), static_cast<Eigen::Index>(start.size()));

  auto finish = [&](SolveStatus status, std::string message) {
    std::vector<double> live_values(polytope.live.size(), 0.0);
    for (std::size_t k = 0; k < face.worlds.size(); ++k) {
      const auto pos = std::lower_bound(polytope.live.begin(),
                                        polytope.live.end(), face.worlds[k]);
      live_values[static_cast<std::size_t>(pos - polytope.live.begin())] =
          x(static_cast<Eigen::Index>(k));
    }
    result.jstar = polytope.Expand(live_values);
    result.value = LogLikelihood(model, result.jstar);
    result.stationarity_gap = StationarityGap(model, result.jstar);
    result.status = status;
    result.message = std::move(message);
    if (status == SolveStatus::kConverged &&
        result.stationarity_gap >
            options.tolerance * (1.0 + std::abs(result.value))) {
      result.status = SolveStatus::kNotConverged;
      result.message = "stationarity gap above tolerance";
    }
    return result;
  };

  if (!barrier.has_freedom()) return finish(SolveStatus::kConverged, {});

  constexpr double kGrowth = 10.0;
  constexpr double kMaxWeight = 1e18;
  constexpr double kCentered = 1e-12;
  constexpr int kMaxCenteringSteps = 100;
  const double m = barrier.barrier_count();
  double t = 1.0;
  while (true) {
    for (int step = 0; step < kMaxCenteringSteps; ++step) {
      if (result.iterations >= options.max_iterations) {
        return finish(SolveStatus::kNotConverged,
                      "iteration limit reached before convergence");
      }
      ++result.iterations;
      const double decrement = barrier.NewtonStep(x, t);
      if (decrement < 0.0 || decrement <= kCentered) break;
    }
    const double f = barrier.Objective(x);
    // On the central path the suboptimality is at most m / t.
    if (m / t <= 1e-3 * options.tolerance * (1.0 + std::abs(f))) {
      SolveResult probe = finish(SolveStatus::kConverged, {});
      if (probe.converged() || t >= kMaxWeight) return probe;
    }
    if (t >= kMaxWeight) {
      return finish(SolveStatus::kNotConverged,
                    "barrier weight limit reached before convergence");
    }
    t *= kGrowth;
  }
}

}  // namespace evcomb
