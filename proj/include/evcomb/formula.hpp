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

#ifndef EVCOMB_FORMULA_HPP_
#define EVCOMB_FORMULA_HPP_

// Atoms, propositional formulas, worlds and observation vectors.
//
// Worlds are the rows of the truth table over the registered atoms. World
// index w encodes the assignment in which atom i is true iff bit i of w is set,
// so with atoms A (id 0) and B (id 1) the four worlds are
//   0: !A & !B    1: A & !B    2: !A & B    3: A & B.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evcomb {

using AtomId = std::uint32_t;

inline constexpr std::size_t kDefaultMaxAtoms = 20;

struct Atom {
  AtomId id = 0;
  std::string name;
  std::string description;
};

// Declaration-ordered set of atoms. Mutable while the knowledge base is being
// assembled, then frozen; a frozen registry is safe to share between threads.
class AtomRegistry {
 public:
  explicit AtomRegistry(std::size_t max_atoms = kDefaultMaxAtoms);

  // Throws Error(kInvalidArgument) on a duplicate or malformed name, when the
  // registry is frozen, or when the atom cap would be exceeded.
  const Atom& Register(std::string name, std::string description = {});

  void Freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  std::size_t size() const { return atoms_.size(); }
  std::size_t max_atoms() const { return max_atoms_; }
  std::uint64_t world_count() const { return std::uint64_t{1} << atoms_.size(); }

  std::optional<AtomId> Find(std::string_view name) const;
  const Atom& atom(AtomId id) const { return atoms_.at(id); }
  std::span<const Atom> atoms() const { return atoms_; }

 private:
  std::size_t max_atoms_;
  bool frozen_ = false;
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, AtomId> by_name_;
};

bool IsValidAtomName(std::string_view name);

struct World {
  std::uint64_t index = 0;

  bool Holds(AtomId atom) const { return ((index >> atom) & 1u) != 0; }
};

enum class Connective { kConstant, kAtom, kNot, kAnd, kOr, kImplies, kIff };

// Immutable propositional formula. Copies share structure.
class Formula {
 public:
  // Default-constructed formula is the constant TRUE.
  Formula();

  static Formula Constant(bool value);
  static Formula Var(AtomId atom);
  static Formula Not(Formula operand);
  static Formula And(Formula lhs, Formula rhs);
  static Formula Or(Formula lhs, Formula rhs);
  static Formula Implies(Formula lhs, Formula rhs);
  static Formula Iff(Formula lhs, Formula rhs);

  Connective connective() const { return node_->connective; }
  bool constant_value() const { return node_->value; }
  AtomId atom() const { return node_->atom; }
  // Operand of NOT, or left operand of a binary connective.
  const Formula& lhs() const { return node_->children[0]; }
  const Formula& rhs() const { return node_->children[1]; }

  bool IsConstantTrue() const {
    return connective() == Connective::kConstant && constant_value();
  }

  // One past the largest atom id referenced, or 0 for a closed formula.
  std::size_t AtomBound() const;

  // Assumes every referenced atom is below the world's width.
  bool Evaluate(World world) const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Connective connective = Connective::kConstant;
    bool value = true;
    AtomId atom = 0;
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula Binary(Connective c, Formula lhs, Formula rhs);

  std::shared_ptr<const Node> node_;
};

// Checks every atom of `formula` against `registry` before evaluating.
// Throws Error(kInvalidArgument) on an unregistered atom.
bool EvalFormula(const Formula& formula, World world,
                 const AtomRegistry& registry);

// Minimal-parenthesis rendering in the text grammar understood by ParseFormula.
std::string ToString(const Formula& formula, const AtomRegistry& registry);

// Parses the formula grammar:
//   iff     := implies ("<->" implies)*          left associative
//   implies := or ("->" implies)?                right associative
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "!" unary | "(" iff ")" | "true" | "false" | IDENT
// Throws ParseError; reported columns are offset by `column_offset` so callers
// embedding a formula in a longer line get columns relative to that line.
Formula ParseFormula(std::string_view text, const AtomRegistry& registry,
                     std::size_t line = 0, std::size_t column_offset = 0);

// 0/1 indicator over worlds: component w is 1 iff the formula holds in w.
class ObservationVector {
 public:
  ObservationVector() = default;
  explicit ObservationVector(std::vector<std::uint8_t> bits);

  // Throws Error(kInvalidArgument) if `n_atoms` is below the formula's atom
  // bound or above 30.
  static ObservationVector FromFormula(const Formula& formula,
                                       std::size_t n_atoms);
  static ObservationVector Constant(std::size_t dimension, bool value);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t w) const { return bits_[w] != 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  std::size_t Count() const;
  bool IsZero() const { return Count() == 0; }

  ObservationVector Complement() const;
  ObservationVector Intersect(const ObservationVector& other) const;
  // Copy with the masked worlds cleared.
  ObservationVector WithoutWorlds(std::span<const std::uint8_t> zeroed) const;

  friend bool operator==(const ObservationVector&,
                         const ObservationVector&) = default;
  friend auto operator<=>(const ObservationVector&,
                          const ObservationVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Joint distribution vector: one probability per world.
using Jdv = std::vector<double>;

// Nonnegative components summing to one within `tolerance`.
bool IsValidJdv(std::span<const double> jdv, double tolerance = 1e-9);

// Probability of the observation under `jdv` (dot product). Throws
// Error(kInvalidArgument) on a dimension mismatch.
double ProbOf(const ObservationVector& observation, std::span<const double> jdv);

// Human-readable assignment, e.g. "A=1 B=0".
std::string WorldLabel(World world, const AtomRegistry& registry);

}  // namespace evcomb

#endif  // EVCOMB_FORMULA_HPP_
