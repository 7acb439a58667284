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

#ifndef EVCOMB_QUERY_HPP_
#define EVCOMB_QUERY_HPP_

// Probability intervals over the set of all maximum-likelihood distributions.
//
// Two feasible JDVs have the same likelihood whenever they give every observed
// event the same probability, and a concave maximum is unique up to such
// moves. The maximizer set is therefore the feasible polytope cut down by
// o_i . j = o_i . jstar for every likelihood term, and interval queries are
// linear (or linear-fractional) programs over it.

#include <cstddef>
#include <vector>

#include "evcomb/evidence.hpp"
#include "evcomb/formula.hpp"
#include "evcomb/optimizer.hpp"

namespace evcomb {

// Half-width of the band around each pinned observation probability.
inline constexpr double kMaximizerBand = 1e-8;
// Intervals narrower than this are reported as a single value.
inline constexpr double kDegenerateWidth = 1e-6;
// Probabilities at or below this count as zero for conditioning.
inline constexpr double kZeroProbability = 1e-9;

struct MaximizerPolytope {
  std::size_t n_atoms = 0;
  // Feasible polytope whose constraints include the pinned observation bands.
  FeasiblePolytope polytope;
  // Index in polytope.constraints where the pinned bands start.
  std::size_t first_pinned = 0;
  Jdv jstar;
};

// Throws Error(kInvalidArgument) unless `result` converged.
MaximizerPolytope BuildMaximizerPolytope(const CompiledModel& model,
                                         const SolveResult& result,
                                         double band = kMaximizerBand);

// Orthonormal basis of the directions, over live worlds, that no term can
// see. Vectors have the model's full dimension with zeros on zeroed worlds.
std::vector<std::vector<double>> NullSpaceBasis(const CompiledModel& model);

struct ProbabilityInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate = false;
  // Conditional queries only: the condition has probability 0 at some
  // maximizer, so lo/hi are the infimum/supremum over the rest.
  bool open_endpoint = false;
};

ProbabilityInterval ProbInterval(const MaximizerPolytope& mp,
                                 const ObservationVector& observation);
ProbabilityInterval ProbInterval(const MaximizerPolytope& mp,
                                 const Formula& formula);

// Bounds of P(event | condition) by Charnes-Cooper: with y = j / P(condition)
// and scale = 1 / P(condition), optimize P_y(condition & event) subject to
// P_y(condition) = 1 and the polytope rows homogenized by `scale`.
// Throws Error(kImpossibleCondition) when the condition has probability 0 at
// every maximizer.
ProbabilityInterval ConditionalInterval(const MaximizerPolytope& mp,
                                        const Formula& event,
                                        const Formula& condition);

}  // namespace evcomb

#endif  // EVCOMB_QUERY_HPP_
