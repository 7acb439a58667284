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

#ifndef EVCOMB_OPTIMIZER_HPP_
#define EVCOMB_OPTIMIZER_HPP_

// Maximum-likelihood search over the feasible set of joint distributions.
//
// The log-likelihood is concave, so a feasible point at which no feasible
// direction improves it to first order is a global maximum. Maximize() returns
// such a point together with the certificate
//   gap = max_{x feasible} grad(jstar) . (x - jstar),
// computed by one linear program.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evcomb/evidence.hpp"
#include "evcomb/lp.hpp"

namespace evcomb {

// { j : j >= 0, sum j = 1, j = 0 on zeroed worlds, lo <= o . j <= hi }.
struct FeasiblePolytope {
  std::size_t dimension = 0;
  std::vector<std::size_t> live;
  std::vector<LinearConstraint> constraints;

  static FeasiblePolytope FromModel(const CompiledModel& model);

  // Appends the polytope's rows, over variables indexed like `live`, to `lp`.
  // `lp.num_variables` may exceed live.size(); extra columns get zeros.
  void AppendRows(LinearProgram& lp) const;
  // LP over the polytope with `objective` given per live world.
  LinearProgram MakeLp(std::span<const double> objective) const;
  // Scatters a per-live-world vector into a full JDV.
  Jdv Expand(std::span<const double> live_values) const;
};

struct InteriorPoint {
  Jdv point;
  // Smallest slack over j_w >= 0 and the non-vacuous sides of each interval.
  double min_slack = 0.0;
  bool interior = false;
};

// Maximizes the minimum inequality slack. Throws Error(kInfeasible) when the
// polytope is empty; returns a boundary point with interior == false when it
// has no strict interior.
InteriorPoint FindInteriorPoint(const FeasiblePolytope& polytope);

enum class SolveStatus { kConverged, kInfeasible, kContradiction, kNotConverged };

const char* SolveStatusName(SolveStatus status);

struct SolveOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 10000;
  // When set, the start point is moved a random distance toward a random
  // vertex of the feasible set.
  std::optional<std::uint64_t> seed;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kNotConverged;
  Jdv jstar;
  double value = 0.0;
  std::size_t iterations = 0;
  double stationarity_gap = 0.0;
  std::string message;
  // For kInfeasible / kContradiction: source line of the first probability
  // bound whose addition empties the feasible set or zeroes an observed
  // event, or 0 if none is implicated.
  std::size_t source_line = 0;

  bool converged() const { return status == SolveStatus::kConverged; }
};

SolveResult Maximize(const CompiledModel& model, const SolveOptions& options = {});

// max over the feasible set of grad(jdv) . (x - jdv). Requires jdv to give
// every term positive probability.
double StationarityGap(const CompiledModel& model, std::span<const double> jdv);

}  // namespace evcomb

#endif  // EVCOMB_OPTIMIZER_HPP_
