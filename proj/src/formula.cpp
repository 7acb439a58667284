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

#include "evcomb/formula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "evcomb/error.hpp"

namespace evcomb {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kPolynomiality: return "polynomiality violation";
    case ErrorKind::kContradiction: return "contradiction";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kNotConverged: return "not converged";
    case ErrorKind::kImpossibleCondition: return "impossible condition";
  }
  return "unknown";
}

bool IsValidAtomName(std::string_view name) {
  if (name.empty()) return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!std::isalpha(head) && head != '_') return false;
  for (char ch : name) {
    auto c = static_cast<unsigned char>(ch);
    if (!std::isalnum(c) && c != '_') return false;
  }
  return name != "true" && name != "false" && name != "TRUE" &&
         name != "FALSE";
}

AtomRegistry::AtomRegistry(std::size_t max_atoms) : max_atoms_(max_atoms) {
  if (max_atoms_ > 30) {
    throw Error(ErrorKind::kInvalidArgument,
                "atom cap above 30 cannot be represented densely");
  }
}

const Atom& AtomRegistry::Register(std::string name, std::string description) {
  if (frozen_) {
    throw Error(ErrorKind::kInvalidArgument,
                "atom registry is frozen; cannot register '" + name + "'");
  }
  if (!IsValidAtomName(name)) {
    throw Error(ErrorKind::kInvalidArgument,
                "invalid atom name '" + name + "'");
  }
  if (by_name_.contains(name)) {
    throw Error(ErrorKind::kInvalidArgument,
                "duplicate atom name '" + name + "'");
  }
  if (atoms_.size() >= max_atoms_) {
    throw Error(ErrorKind::kInvalidArgument,
                "atom cap of " + std::to_string(max_atoms_) + " reached");
  }
  const auto id = static_cast<AtomId>(atoms_.size());
  by_name_.emplace(name, id);
  atoms_.push_back(Atom{id, std::move(name), std::move(description)});
  return atoms_.back();
}

std::optional<AtomId> AtomRegistry::Find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Formula

Formula::Formula() : Formula(Constant(true)) {}

Formula Formula::Constant(bool value) {
  auto node = std::make_shared<Node>();
  node->connective = Connective::kConstant;
  node->value = value;
  return Formula(std::move(node));
}

Formula Formula::Var(AtomId atom) {
  auto node = std::make_shared<Node>();
  node->connective = Connective::kAtom;
  node->atom = atom;
  return Formula(std::move(node));
}

Formula Formula::Not(Formula operand) {
  auto node = std::make_shared<Node>();
  node->connective = Connective::kNot;
  node->children.push_back(std::move(operand));
  return Formula(std::move(node));
}

Formula Formula::Binary(Connective c, Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->connective = c;
  node->children.push_back(std::move(lhs));
  node->children.push_back(std::move(rhs));
  return Formula(std::move(node));
}

Formula Formula::And(Formula lhs, Formula rhs) {
  return Binary(Connective::kAnd, std::move(lhs), std::move(rhs));
}
Formula Formula::Or(Formula lhs, Formula rhs) {
  return Binary(Connective::kOr, std::move(lhs), std::move(rhs));
}
Formula Formula::Implies(Formula lhs, Formula rhs) {
  return Binary(Connective::kImplies, std::move(lhs), std::move(rhs));
}
Formula Formula::Iff(Formula lhs, Formula rhs) {
  return Binary(Connective::kIff, std::move(lhs), std::move(rhs));
}

std::size_t Formula::AtomBound() const {
  switch (connective()) {
    case Connective::kConstant: return 0;
    case Connective::kAtom: return static_cast<std::size_t>(atom()) + 1;
    case Connective::kNot: return lhs().AtomBound();
    default: return std::max(lhs().AtomBound(), rhs().AtomBound());
  }
}

bool Formula::Evaluate(World world) const {
  switch (connective()) {
    case Connective::kConstant: return constant_value();
    case Connective::kAtom: return world.Holds(atom());
    case Connective::kNot: return !lhs().Evaluate(world);
    case Connective::kAnd: return lhs().Evaluate(world) && rhs().Evaluate(world);
    case Connective::kOr: return lhs().Evaluate(world) || rhs().Evaluate(world);
    case Connective::kImplies:
      return !lhs().Evaluate(world) || rhs().Evaluate(world);
    case Connective::kIff: return lhs().Evaluate(world) == rhs().Evaluate(world);
  }
  return false;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.connective() != b.connective()) return false;
  switch (a.connective()) {
    case Connective::kConstant: return a.constant_value() == b.constant_value();
    case Connective::kAtom: return a.atom() == b.atom();
    case Connective::kNot: return a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

bool EvalFormula(const Formula& formula, World world,
                 const AtomRegistry& registry) {
  if (formula.AtomBound() > registry.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "formula references an unregistered atom");
  }
  return formula.Evaluate(world);
}

namespace {

int Precedence(Connective c) {
  switch (c) {
    case Connective::kIff: return 1;
    case Connective::kImplies: return 2;
    case Connective::kOr: return 3;
    case Connective::kAnd: return 4;
    case Connective::kNot: return 5;
    default: return 6;
  }
}

const char* Symbol(Connective c) {
  switch (c) {
    case Connective::kIff: return " <-> ";
    case Connective::kImplies: return " -> ";
    case Connective::kOr: return " | ";
    case Connective::kAnd: return " & ";
    default: return "";
  }
}

void Render(const Formula& f, const AtomRegistry& registry, std::string& out) {
  auto child = [&](const Formula& c, bool parens) {
    if (parens) out += '(';
    Render(c, registry, out);
    if (parens) out += ')';
  };
  const Connective c = f.connective();
  switch (c) {
    case Connective::kConstant:
      out += f.constant_value() ? "true" : "false";
      return;
    case Connective::kAtom:
      if (f.atom() < registry.size()) {
        out += registry.atom(f.atom()).name;
      } else {
        out += "?" + std::to_string(f.atom());
      }
      return;
    case Connective::kNot:
      out += '!';
      child(f.lhs(), Precedence(f.lhs().connective()) < Precedence(c));
      return;
    default: {
      const int p = Precedence(c);
      const bool right_assoc = c == Connective::kImplies;
      const int lp = Precedence(f.lhs().connective());
      const int rp = Precedence(f.rhs().connective());
      child(f.lhs(), lp < p || (lp == p && right_assoc));
      out += Symbol(c);
      child(f.rhs(), rp < p || (rp == p && !right_assoc));
      return;
    }
  }
}

}  // namespace

std::string ToString(const Formula& formula, const AtomRegistry& registry) {
  std::string out;
  Render(formula, registry, out);
  return out;
}

// ---------------------------------------------------------------------------
// Observation vectors

ObservationVector::ObservationVector(std::vector<std::uint8_t> bits)
    : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

ObservationVector ObservationVector::FromFormula(const Formula& formula,
                                                 std::size_t n_atoms) {
  if (formula.AtomBound() > n_atoms) {
    throw Error(ErrorKind::kInvalidArgument,
                "formula references atom " +
                    std::to_string(formula.AtomBound() - 1) + " beyond " +
                    std::to_string(n_atoms) + " atoms");
  }
  if (n_atoms > 30) {
    throw Error(ErrorKind::kInvalidArgument, "too many atoms for dense worlds");
  }
  const std::uint64_t worlds = std::uint64_t{1} << n_atoms;
  std::vector<std::uint8_t> bits(worlds);
  for (std::uint64_t w = 0; w < worlds; ++w) {
    bits[w] = formula.Evaluate(World{w}) ? 1 : 0;
  }
  ObservationVector ov;
  ov.bits_ = std::move(bits);
  return ov;
}

ObservationVector ObservationVector::Constant(std::size_t dimension,
                                              bool value) {
  ObservationVector ov;
  ov.bits_.assign(dimension, value ? 1 : 0);
  return ov;
}

std::size_t ObservationVector::Count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

ObservationVector ObservationVector::Complement() const {
  ObservationVector ov = *this;
  for (auto& b : ov.bits_) b ^= 1;
  return ov;
}

ObservationVector ObservationVector::Intersect(
    const ObservationVector& other) const {
  if (other.size() != size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "observation vectors differ in dimension");
  }
  ObservationVector ov = *this;
  for (std::size_t w = 0; w < size(); ++w) ov.bits_[w] &= other.bits_[w];
  return ov;
}

ObservationVector ObservationVector::WithoutWorlds(
    std::span<const std::uint8_t> zeroed) const {
  ObservationVector ov = *this;
  for (std::size_t w = 0; w < size() && w < zeroed.size(); ++w) {
    if (zeroed[w]) ov.bits_[w] = 0;
  }
  return ov;
}

bool IsValidJdv(std::span<const double> jdv, double tolerance) {
  double sum = 0.0;
  for (double p : jdv) {
    if (!(p >= 0.0) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

double ProbOf(const ObservationVector& observation,
              std::span<const double> jdv) {
  if (observation.size() != jdv.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "dimension mismatch: observation vector has " +
                    std::to_string(observation.size()) + " worlds, JDV has " +
                    std::to_string(jdv.size()));
  }
  double p = 0.0;
  for (std::size_t w = 0; w < jdv.size(); ++w) {
    if (observation[w]) p += jdv[w];
  }
  return p;
}

std::string WorldLabel(World world, const AtomRegistry& registry) {
  std::string out;
  for (const Atom& a : registry.atoms()) {
    if (!out.empty()) out += ' ';
    out += a.name;
    out += world.Holds(a.id) ? "=1" : "=0";
  }
  return out;
}

}  // namespace evcomb
