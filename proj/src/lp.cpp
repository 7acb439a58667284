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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "evcomb/error.hpp"

namespace evcomb {

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration limit";
  }
  return "unknown";
}

namespace {

// Row-major tableau. Row 0..m-1 are constraints, the last column holds the
// right-hand side. Reduced costs are kept separately.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const {
    return data_[r * (cols_ + 1) + c];
  }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void Pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  void EraseRow(std::size_t r) {
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1));
    data_.erase(first, first + static_cast<std::ptrdiff_t>(cols_ + 1));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& options)
      : lp_(lp), options_(options) {}

  LpSolution Solve(Sense sense) {
    Build();
    // Phase one: minimize the sum of artificials.
    std::vector<double> cost(tableau_.cols(), 0.0);
    for (std::size_t c = first_artificial_; c < tableau_.cols(); ++c) cost[c] = 1.0;
    LpStatus status = Optimize(cost, tableau_.cols());
    if (status == LpStatus::kIterationLimit) return {status, 0.0, {}};
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < tableau_.rows(); ++r) {
      if (basis_[r] >= first_artificial_) infeasibility += tableau_.rhs(r);
    }
    if (infeasibility > options_.feasibility_tolerance * scale_) {
      return {LpStatus::kInfeasible, 0.0, {}};
    }
    DriveOutArtificials();

    std::fill(cost.begin(), cost.end(), 0.0);
    const double sign = sense == Sense::kMaximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < lp_.num_variables; ++j) {
      cost[j] = sign * lp_.objective[j];
    }
    status = Optimize(cost, first_artificial_);
    if (status != LpStatus::kOptimal) return {status, 0.0, {}};

    LpSolution out;
    out.status = LpStatus::kOptimal;
    out.point.assign(lp_.num_variables, 0.0);
    for (std::size_t r = 0; r < tableau_.rows(); ++r) {
      if (basis_[r] < lp_.num_variables) {
        out.point[basis_[r]] = std::max(0.0, tableau_.rhs(r));
      }
    }
    out.value = 0.0;
    for (std::size_t j = 0; j < lp_.num_variables; ++j) {
      out.value += lp_.objective[j] * out.point[j];
    }
    return out;
  }

 private:
  void Build() {
    const std::size_t n = lp_.num_variables;
    const std::size_t m = lp_.rows.size();
    std::size_t slacks = 0;
    std::size_t artificials = 0;
    for (const LinearRow& row : lp_.rows) {
      if (row.relation != Relation::kEqual) ++slacks;
      const bool flip = row.rhs < 0.0;
      Relation rel = row.relation;
      if (flip && rel != Relation::kEqual) {
        rel = rel == Relation::kLessEqual ? Relation::kGreaterEqual
                                          : Relation::kLessEqual;
      }
      if (rel != Relation::kLessEqual) ++artificials;
    }
    first_artificial_ = n + slacks;
    tableau_ = Tableau(m, n + slacks + artificials);
    basis_.assign(m, 0);

    scale_ = 1.0;
    std::size_t slack = n;
    std::size_t artificial = first_artificial_;
    for (std::size_t r = 0; r < m; ++r) {
      const LinearRow& row = lp_.rows[r];
      const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
      Relation rel = row.relation;
      if (sign < 0.0 && rel != Relation::kEqual) {
        rel = rel == Relation::kLessEqual ? Relation::kGreaterEqual
                                          : Relation::kLessEqual;
      }
      for (std::size_t j = 0; j < n; ++j) {
        tableau_.at(r, j) = sign * row.coefficients[j];
      }
      tableau_.rhs(r) = sign * row.rhs;
      scale_ = std::max(scale_, std::abs(row.rhs));
      if (rel == Relation::kLessEqual) {
        tableau_.at(r, slack) = 1.0;
        basis_[r] = slack++;
      } else {
        if (rel == Relation::kGreaterEqual) tableau_.at(r, slack++) = -1.0;
        tableau_.at(r, artificial) = 1.0;
        basis_[r] = artificial++;
      }
    }
  }

  // Minimizes cost . x using columns [0, allowed). Reduced costs are
  // recomputed from the basis each time so phase two starts clean.
  LpStatus Optimize(const std::vector<double>& cost, std::size_t allowed) {
    const std::size_t m = tableau_.rows();
    double cost_scale = 0.0;
    for (std::size_t c = 0; c < allowed; ++c) {
      cost_scale = std::max(cost_scale, std::abs(cost[c]));
    }
    const double tol = options_.optimality_tolerance * std::max(1.0, cost_scale);

    // A column whose only improvement is roundoff-sized and that has no
    // pivot row is skipped rather than reported as an unbounded ray.
    const double ray_tol = 1e-9 * std::max(1.0, cost_scale);
    std::vector<double> reduced(allowed);
    std::vector<bool> skipped(allowed, false);
    for (std::size_t iter = 0; iter < options_.max_pivots; ++iter) {
      for (std::size_t c = 0; c < allowed; ++c) {
        double z = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          const double a = tableau_.at(r, c);
          if (a != 0.0) z += cost[basis_[r]] * a;
        }
        reduced[c] = cost[c] - z;
      }
      std::size_t entering = allowed;
      std::size_t leaving = m;
      while (true) {
        entering = allowed;
        for (std::size_t c = 0; c < allowed; ++c) {
          if (reduced[c] < -tol && !skipped[c] && !IsBasic(c)) {
            entering = c;
            break;
          }
        }
        if (entering == allowed) return LpStatus::kOptimal;
        leaving = LeavingRow(entering);
        if (leaving < m) break;
        if (reduced[entering] < -ray_tol) return LpStatus::kUnbounded;
        skipped[entering] = true;
      }
      tableau_.Pivot(leaving, entering);
      basis_[leaving] = entering;
      std::fill(skipped.begin(), skipped.end(), false);
    }
    return LpStatus::kIterationLimit;
  }

  // Two-pass ratio test: find the smallest ratio with rhs relaxed by a tiny
  // amount, then take the largest pivot among rows within that ratio (ties
  // go to the lowest basic index). Returns rows() when the column has no
  // pivot.
  std::size_t LeavingRow(std::size_t entering) const {
    const std::size_t m = tableau_.rows();
    double column_max = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      column_max = std::max(column_max, std::abs(tableau_.at(r, entering)));
    }
    const double pivot_min =
        std::max(options_.pivot_tolerance, 1e-9 * column_max);
    const double relax = 1e-12 * scale_;
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = tableau_.at(r, entering);
      if (a <= pivot_min) continue;
      bound = std::min(bound, (std::max(0.0, tableau_.rhs(r)) + relax) / a);
    }
    std::size_t leaving = m;
    double best_pivot = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = tableau_.at(r, entering);
      if (a <= pivot_min) continue;
      if (std::max(0.0, tableau_.rhs(r)) / a > bound) continue;
      if (a > best_pivot * (1.0 + 1e-12) ||
          (a >= best_pivot * (1.0 - 1e-12) && basis_[r] < basis_[leaving])) {
        best_pivot = a;
        leaving = r;
      }
    }
    return leaving;
  }

  bool IsBasic(std::size_t c) const {
    return std::find(basis_.begin(), basis_.end(), c) != basis_.end();
  }

  // After a feasible phase one, replaces remaining (zero-valued) artificial
  // basics by structural columns, dropping rows that are linearly dependent.
  void DriveOutArtificials() {
    for (std::size_t r = 0; r < tableau_.rows();) {
      if (basis_[r] < first_artificial_) {
        ++r;
        continue;
      }
      std::size_t pc = first_artificial_;
      double best = options_.pivot_tolerance;
      for (std::size_t c = 0; c < first_artificial_; ++c) {
        if (!IsBasic(c) && std::abs(tableau_.at(r, c)) > best) {
          best = std::abs(tableau_.at(r, c));
          pc = c;
        }
      }
      if (pc == first_artificial_) {
        tableau_.EraseRow(r);
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        continue;
      }
      tableau_.Pivot(r, pc);
      basis_[r] = pc;
      ++r;
    }
  }

  const LinearProgram& lp_;
  const LpOptions& options_;
  Tableau tableau_{0, 0};
  std::vector<std::size_t> basis_;
  std::size_t first_artificial_ = 0;
  double scale_ = 1.0;
};

}  // namespace

LpSolution SolveLp(const LinearProgram& lp, Sense sense,
                   const LpOptions& options) {
  if (lp.objective.size() != lp.num_variables) {
    throw Error(ErrorKind::kInvalidArgument,
                "objective has " + std::to_string(lp.objective.size()) +
                    " coefficients for " + std::to_string(lp.num_variables) +
                    " variables");
  }
  for (const LinearRow& row : lp.rows) {
    if (row.coefficients.size() != lp.num_variables) {
      throw Error(ErrorKind::kInvalidArgument, "constraint row width mismatch");
    }
  }
  return Simplex(lp, options).Solve(sense);
}

}  // namespace evcomb
