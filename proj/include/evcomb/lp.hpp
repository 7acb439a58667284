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

#ifndef EVCOMB_LP_HPP_
#define EVCOMB_LP_HPP_

// Small dense linear programs over nonnegative variables, solved with a
// two-phase tableau simplex. Pivoting follows Bland's rule (lowest eligible
// index enters, ties in the ratio test leave by lowest basic index), so the
// solver cannot cycle and is deterministic for identical input.

#include <cstddef>
#include <vector>

namespace evcomb {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LinearRow {
  std::vector<double> coefficients;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

// optimize objective . x  subject to  rows, x >= 0.
struct LinearProgram {
  std::size_t num_variables = 0;
  std::vector<double> objective;
  std::vector<LinearRow> rows;

  void AddRow(std::vector<double> coefficients, Relation relation, double rhs) {
    rows.push_back(LinearRow{std::move(coefficients), relation, rhs});
  }
};

enum class Sense { kMinimize, kMaximize };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> point;
};

struct LpOptions {
  double pivot_tolerance = 1e-11;
  // Phase-one residual accepted as feasible.
  double feasibility_tolerance = 1e-9;
  // Relative to the largest objective coefficient.
  double optimality_tolerance = 1e-12;
  std::size_t max_pivots = 200000;
};

// Throws Error(kInvalidArgument) when row or objective widths do not match
// num_variables.
LpSolution SolveLp(const LinearProgram& lp, Sense sense,
                   const LpOptions& options = {});

const char* LpStatusName(LpStatus status);

}  // namespace evcomb

#endif  // EVCOMB_LP_HPP_
