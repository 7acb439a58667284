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

#include "evcomb/evidence.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "evcomb/error.hpp"

namespace evcomb {

CompiledModel::CompiledModel(std::size_t n_atoms, std::vector<Term> terms,
                             std::vector<std::uint8_t> zeroed,
                             std::vector<LinearConstraint> constraints)
    : n_atoms_(n_atoms),
      terms_(std::move(terms)),
      zeroed_(std::move(zeroed)),
      constraints_(std::move(constraints)) {
  for (std::size_t w = 0; w < zeroed_.size(); ++w) {
    if (!zeroed_[w]) live_.push_back(w);
  }
}

std::int64_t CompiledModel::TotalExponent() const {
  std::int64_t total = 0;
  for (const Term& t : terms_) total += t.exponent;
  return total;
}

namespace {

void CheckDimension(const CompiledModel& model, std::span<const double> jdv) {
  if (jdv.size() != model.dimension()) {
    throw Error(ErrorKind::kInvalidArgument,
                "dimension mismatch: model has " +
                    std::to_string(model.dimension()) + " worlds, JDV has " +
                    std::to_string(jdv.size()));
  }
}

}  // namespace

double LogLikelihood(const CompiledModel& model, std::span<const double> jdv) {
  CheckDimension(model, jdv);
  for (std::size_t w = 0; w < jdv.size(); ++w) {
    if (model.IsZeroed(w) && jdv[w] > 1e-12) {
      throw Error(ErrorKind::kInvalidArgument,
                  "JDV assigns mass to world " + std::to_string(w) +
                      ", which the axioms rule out");
    }
  }
  double value = 0.0;
  for (const Term& term : model.terms()) {
    const double s = ProbOf(term.observation, jdv);
    if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
    value += static_cast<double>(term.exponent) * std::log(s);
  }
  return value;
}

std::vector<double> LogLikelihoodGradient(const CompiledModel& model,
                                          std::span<const double> jdv) {
  CheckDimension(model, jdv);
  std::vector<double> grad(jdv.size(), 0.0);
  for (const Term& term : model.terms()) {
    const double s = ProbOf(term.observation, jdv);
    if (!(s > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "gradient undefined: an observed event has probability 0");
    }
    const double weight = static_cast<double>(term.exponent) / s;
    for (std::size_t w = 0; w < jdv.size(); ++w) {
      if (term.observation[w]) grad[w] += weight;
    }
  }
  for (std::size_t w = 0; w < jdv.size(); ++w) {
    if (model.IsZeroed(w)) grad[w] = 0.0;
  }
  return grad;
}

// ---------------------------------------------------------------------------

KnowledgeBase::KnowledgeBase(AtomRegistry registry)
    : registry_(std::move(registry)) {}

void KnowledgeBase::CheckMutable() const {
  if (compiled_) {
    throw Error(ErrorKind::kInvalidArgument,
                "knowledge base is already compiled");
  }
}

void KnowledgeBase::CheckAtoms(const Formula& f) const {
  if (f.AtomBound() > registry_.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "formula references an unregistered atom");
  }
}

void KnowledgeBase::AddExperiment(Experiment experiment) {
  CheckMutable();
  CheckAtoms(experiment.event);
  CheckAtoms(experiment.condition);
  if (experiment.trials == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "experiment needs at least one trial", experiment.source_line);
  }
  if (experiment.successes > experiment.trials) {
    throw Error(ErrorKind::kInvalidArgument,
                "experiment reports " + std::to_string(experiment.successes) +
                    " successes in " + std::to_string(experiment.trials) +
                    " trials",
                experiment.source_line);
  }
  constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 53;
  if (experiment.trials > kMaxCount) {
    throw Error(ErrorKind::kInvalidArgument, "trial count too large",
                experiment.source_line);
  }
  experiments_.push_back(std::move(experiment));
}

void KnowledgeBase::AddAxiom(Axiom axiom) {
  CheckMutable();
  CheckAtoms(axiom.formula);
  if (ObservationVector::FromFormula(axiom.formula, registry_.size()).IsZero()) {
    throw Error(ErrorKind::kContradiction,
                "axiom '" + ToString(axiom.formula, registry_) +
                    "' is unsatisfiable",
                axiom.source_line);
  }
  axioms_.push_back(std::move(axiom));
}

void KnowledgeBase::AddInterval(IntervalConstraint constraint) {
  CheckMutable();
  CheckAtoms(constraint.formula);
  if (!(constraint.lo >= 0.0 && constraint.lo <= constraint.hi &&
        constraint.hi <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "probability bounds must satisfy 0 <= lo <= hi <= 1",
                constraint.source_line);
  }
  intervals_.push_back(std::move(constraint));
}

CompiledModel KnowledgeBase::Compile() {
  const std::size_t n = registry_.size();
  if (n == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot compile a knowledge base without atoms");
  }
  registry_.Freeze();
  compiled_ = true;

  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::uint8_t> zeroed(dim, 0);
  for (const Axiom& axiom : axioms_) {
    const auto ov = ObservationVector::FromFormula(axiom.formula, n);
    for (std::size_t w = 0; w < dim; ++w) {
      if (!ov[w]) zeroed[w] = 1;
    }
  }
  const auto live = ObservationVector::Constant(dim, true).WithoutWorlds(zeroed);
  if (live.IsZero()) {
    std::string lines;
    for (const Axiom& a : axioms_) {
      if (!lines.empty()) lines += ", ";
      lines += std::to_string(a.source_line);
    }
    throw Error(ErrorKind::kContradiction,
                "the axioms are jointly unsatisfiable (lines " + lines + ")",
                axioms_.empty() ? 0 : axioms_.front().source_line);
  }

  struct Accumulator {
    std::int64_t exponent = 0;
    // First experiment contributing positively, and first using this vector
    // as a condition; used for error messages.
    const Experiment* positive = nullptr;
    const Experiment* as_condition = nullptr;
  };
  std::map<ObservationVector, Accumulator> terms;
  auto add = [&](const Formula& f, std::int64_t k, const Experiment& source,
                 bool is_condition) {
    if (k == 0 && !is_condition) return;
    auto& acc =
        terms[ObservationVector::FromFormula(f, n).WithoutWorlds(zeroed)];
    acc.exponent += k;
    if (k > 0 && acc.positive == nullptr) acc.positive = &source;
    if (is_condition && acc.as_condition == nullptr) acc.as_condition = &source;
  };

  for (const Experiment& e : experiments_) {
    const auto n_ok = static_cast<std::int64_t>(e.successes);
    const auto m = static_cast<std::int64_t>(e.trials);
    if (e.condition.IsConstantTrue()) {
      add(e.event, n_ok, e, false);
      add(Formula::Not(e.event), m - n_ok, e, false);
    } else {
      add(Formula::And(e.condition, e.event), n_ok, e, false);
      add(Formula::And(e.condition, Formula::Not(e.event)), m - n_ok, e, false);
      add(e.condition, -m, e, true);
    }
  }

  std::vector<Term> compiled;
  for (auto& [ov, acc] : terms) {
    if (ov.IsZero() && acc.exponent > 0) {
      const Experiment& e = *acc.positive;
      std::string what = "'" + ToString(e.event, registry_) + "'";
      if (!e.condition.IsConstantTrue()) {
        what += " given '" + ToString(e.condition, registry_) + "'";
      }
      throw Error(ErrorKind::kContradiction,
                  "evidence contradicts the axioms: observed outcome of " +
                      what + " (line " + std::to_string(e.source_line) +
                      ") is ruled out; discard the evidence or the axiom",
                  e.source_line);
    }
  }
  for (auto& [ov, acc] : terms) {
    if (acc.exponent < 0 && ov != live) {
      const Experiment* e = acc.as_condition;
      const std::string cond =
          e != nullptr ? ToString(e->condition, registry_) : std::string("?");
      throw Error(
          ErrorKind::kPolynomiality,
          "likelihood is not a polynomial: condition '" + cond +
              "' is used by conditional experiments " +
              std::to_string(-acc.exponent) +
              " more times than it was observed; every N conditional trials "
              "on a condition need an experiment in which the condition "
              "occurred at least N times",
          e != nullptr ? e->source_line : 0);
    }
  }
  for (auto& [ov, acc] : terms) {
    // A vector covering every live world has probability 1 under any JDV.
    if (acc.exponent == 0 || ov.IsZero() || ov == live) continue;
    compiled.push_back(Term{ov, acc.exponent});
  }

  std::vector<LinearConstraint> constraints;
  constraints.reserve(intervals_.size());
  for (const IntervalConstraint& c : intervals_) {
    constraints.push_back(LinearConstraint{
        ObservationVector::FromFormula(c.formula, n).WithoutWorlds(zeroed),
        c.lo, c.hi, c.source_line});
  }
  return CompiledModel(n, std::move(compiled), std::move(zeroed),
                       std::move(constraints));
}

}  // namespace evcomb
