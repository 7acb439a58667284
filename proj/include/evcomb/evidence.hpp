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

#ifndef EVCOMB_EVIDENCE_HPP_
#define EVCOMB_EVIDENCE_HPP_

// Knowledge base of experiments, axioms and probability bounds, and its
// compilation into a log-likelihood objective plus a feasible polytope.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "evcomb/formula.hpp"

namespace evcomb {

// `successes` of `trials` iid outcomes in which `event` held, counted only in
// trials where `condition` held (TRUE for an unconditional experiment).
struct Experiment {
  Formula event;
  Formula condition = Formula::Constant(true);
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  std::size_t source_line = 0;
};

struct Axiom {
  Formula formula;
  std::size_t source_line = 0;
};

// lo <= P(formula) <= hi.
struct IntervalConstraint {
  Formula formula;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t source_line = 0;
};

// One factor (o . j)^exponent of the likelihood.
struct Term {
  ObservationVector observation;
  std::int64_t exponent = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

struct LinearConstraint {
  ObservationVector observation;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t source_line = 0;

  friend bool operator==(const LinearConstraint& a, const LinearConstraint& b) {
    return a.observation == b.observation && a.lo == b.lo && a.hi == b.hi;
  }
};

// Immutable result of KnowledgeBase::Compile.
//
// Invariants: every term has exponent >= 1, a nonzero observation vector that
// is not identically one on the live worlds, and no two terms share a vector.
// Terms are sorted by observation vector. Observation vectors of terms and
// constraints are already cleared on zeroed worlds.
class CompiledModel {
 public:
  CompiledModel(std::size_t n_atoms, std::vector<Term> terms,
                std::vector<std::uint8_t> zeroed,
                std::vector<LinearConstraint> constraints);

  std::size_t n_atoms() const { return n_atoms_; }
  std::size_t dimension() const { return zeroed_.size(); }

  std::span<const Term> terms() const { return terms_; }
  // 1 marks a world forced to probability zero by the axioms.
  std::span<const std::uint8_t> zeroed_worlds() const { return zeroed_; }
  bool IsZeroed(std::size_t world) const { return zeroed_[world] != 0; }
  std::span<const std::size_t> live_worlds() const { return live_; }
  std::span<const LinearConstraint> constraints() const { return constraints_; }

  // Sum of all exponents.
  std::int64_t TotalExponent() const;

 private:
  std::size_t n_atoms_;
  std::vector<Term> terms_;
  std::vector<std::uint8_t> zeroed_;
  std::vector<std::size_t> live_;
  std::vector<LinearConstraint> constraints_;
};

// sum_i k_i log(o_i . j), or -infinity when some o_i . j <= 0.
// Throws Error(kInvalidArgument) on a dimension mismatch or when `jdv` puts
// mass on a zeroed world.
double LogLikelihood(const CompiledModel& model, std::span<const double> jdv);

// Component w is sum_i k_i o_i[w] / (o_i . j); zeroed worlds get 0.
// Throws Error(kInvalidArgument) when some o_i . j <= 0.
std::vector<double> LogLikelihoodGradient(const CompiledModel& model,
                                          std::span<const double> jdv);

class KnowledgeBase {
 public:
  explicit KnowledgeBase(AtomRegistry registry);

  const AtomRegistry& registry() const { return registry_; }

  // Each Add* throws Error(kInvalidArgument) once the knowledge base has been
  // compiled, and on malformed input.
  void AddExperiment(Experiment experiment);
  // Throws Error(kContradiction) for an unsatisfiable axiom.
  void AddAxiom(Axiom axiom);
  void AddInterval(IntervalConstraint constraint);

  std::span<const Experiment> experiments() const { return experiments_; }
  std::span<const Axiom> axioms() const { return axioms_; }
  std::span<const IntervalConstraint> intervals() const { return intervals_; }

  // Freezes the registry. Throws Error(kPolynomiality) when a condition is
  // used more often than it was observed, and Error(kContradiction) when
  // positively observed evidence is ruled out by the axioms.
  CompiledModel Compile();

  bool compiled() const { return compiled_; }

 private:
  void CheckMutable() const;
  void CheckAtoms(const Formula& f) const;

  AtomRegistry registry_;
  std::vector<Experiment> experiments_;
  std::vector<Axiom> axioms_;
  std::vector<IntervalConstraint> intervals_;
  bool compiled_ = false;
};

}  // namespace evcomb

#endif  // EVCOMB_EVIDENCE_HPP_
