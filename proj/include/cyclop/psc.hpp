#pragma once

// Partial-substitution closure: the least set containing a base set of
// atomic substitutions that is closed under rebinding a variable of X to a
// variable of X and under composition.

#include <cstdint>
#include <string>
#include <vector>

#include "cyclop/syntax.hpp"

namespace cyclop {

struct ClosureInput {
  std::vector<Substitution> base;
  VarSet vars;
};

/// How a closure element was first derived. Indices always point at
/// earlier elements (or, for Base, into ClosureInput::base).
struct ClosureWitness {
  enum class Kind { Base, Override, Compose };
  Kind kind = Kind::Base;
  std::size_t first = 0;
  std::size_t second = 0;
  std::string from;  // Override: rebinds `from` ...
  std::string to;    // ... to `to`
};

struct Closure {
  std::vector<Substitution> elements;
  std::vector<ClosureWitness> witnesses;

  bool contains(const Substitution& theta) const;
  std::size_t size() const noexcept { return elements.size(); }
};

/// Throws CompositeBase when a base substitution is composite; the closure
/// would be infinite.
Closure psc(const ClosureInput& input);

/// Upper bound on the closure size: #I ^ #D with D = dom(base) u X and
/// I = img(base) u X u dom(base). Saturates at UINT64_MAX.
std::uint64_t psc_bound(const ClosureInput& input);

/// Rebuilds every element from its witness using the plain substitution
/// operations; true iff each rebuilt element matches its stored element and
/// the elements are pairwise distinct.
bool replay_witnesses(const Closure& closure, const ClosureInput& input);

}  // namespace cyclop
