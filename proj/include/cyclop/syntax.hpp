#pragma once

// First-order syntax with inductive predicates: terms, formulas, sequents,
// substitutions and definition sets.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cyclop {

using VarSet = std::set<std::string>;

struct Term {
  enum class Kind : std::uint8_t { Var, App };

  Kind kind = Kind::Var;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name);
  static Term app(std::string fun, std::vector<Term> args = {});

  bool is_var() const noexcept { return kind == Kind::Var; }
  /// Nullary application.
  bool is_constant() const noexcept { return kind == Kind::App && args.empty(); }
  bool is_atomic() const noexcept { return is_var() || is_constant(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b);
};

enum class FormulaKind : std::uint8_t { PredI, PredO, Eq, Not, Or, And, Imp, Exists, Forall };

struct Formula {
  FormulaKind kind = FormulaKind::PredO;
  /// Predicate symbol for atoms, bound variable for quantifiers.
  std::string symbol;
  /// Predicate arguments, or the two sides of an equality.
  std::vector<Term> args;
  std::vector<Formula> subs;

  static Formula inductive(std::string pred, std::vector<Term> args);
  static Formula ordinary(std::string pred, std::vector<Term> args);
  static Formula equal(Term lhs, Term rhs);
  static Formula negation(Formula f);
  static Formula disjunction(Formula a, Formula b);
  static Formula conjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  bool is_inductive_atom() const noexcept { return kind == FormulaKind::PredI; }
  bool is_quantifier() const noexcept {
    return kind == FormulaKind::Exists || kind == FormulaKind::Forall;
  }

  /// Equality is alpha-equivalence.
  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
};

/// Printed form with bound variables renumbered in traversal order. Two
/// formulas are alpha-equivalent iff their keys are equal.
std::string alpha_key(const Formula& f);
bool alpha_eq(const Formula& a, const Formula& b);

/// Finite map from variables to terms, kept free of identity bindings.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::map<std::string, Term> bindings);

  static Substitution single(std::string var, Term image);

  const std::map<std::string, Term>& bindings() const noexcept { return bindings_; }
  bool empty() const noexcept { return bindings_.empty(); }
  std::size_t size() const noexcept { return bindings_.size(); }

  /// The image of `var`, or `var` itself when unbound.
  Term operator()(const std::string& var) const;
  bool binds(const std::string& var) const { return bindings_.count(var) != 0; }

  VarSet domain() const;
  std::set<Term> image() const;
  bool is_atomic() const;

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.bindings_ == b.bindings_;
  }
  friend bool operator!=(const Substitution& a, const Substitution& b) { return !(a == b); }
  friend bool operator<(const Substitution& a, const Substitution& b) {
    return a.bindings_ < b.bindings_;
  }

 private:
  std::map<std::string, Term> bindings_;
};

enum class SubstKind { Atomic, Composite };
SubstKind classify(const Substitution& theta);

/// Two finite formula sets, canonically ordered by alpha key and
/// deduplicated up to alpha-equivalence.
class Sequent {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Sequent() = default;
  Sequent(std::vector<Formula> antecedent, std::vector<Formula> succedent);

  const std::vector<Formula>& antecedent() const noexcept { return ante_; }
  const std::vector<Formula>& succedent() const noexcept { return succ_; }
  const std::vector<std::string>& antecedent_keys() const noexcept { return ante_keys_; }
  const std::vector<std::string>& succedent_keys() const noexcept { return succ_keys_; }

  std::size_t find_antecedent(const Formula& f) const;
  std::size_t find_succedent(const Formula& f) const;
  bool in_antecedent(const Formula& f) const { return find_antecedent(f) != npos; }
  bool in_succedent(const Formula& f) const { return find_succedent(f) != npos; }

  /// Antecedent positions of inductive-predicate atoms; these are the
  /// occurrence slots traces run through.
  std::vector<std::size_t> inductive_slots() const;
  /// Slot index of an inductive atom, or npos.
  std::size_t slot_of(const Formula& atom) const;

  /// Canonical identity string; equal iff the sequents are identical.
  const std::string& key() const noexcept { return key_; }

  friend bool operator==(const Sequent& a, const Sequent& b) { return a.key_ == b.key_; }
  friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }

 private:
  std::vector<Formula> ante_;
  std::vector<Formula> succ_;
  std::vector<std::string> ante_keys_;
  std::vector<std::string> succ_keys_;
  std::string key_ = "|-";
};

bool alpha_eq(const Sequent& a, const Sequent& b);

void collect_vars(const Term& t, VarSet& out);
VarSet free_vars(const Term& t);
VarSet free_vars(const Formula& f);
VarSet free_vars(const Sequent& s);

Term apply_subst(const Term& t, const Substitution& theta);
/// Capture-avoiding; bound variables are primed when they would capture.
Formula apply_subst(const Formula& f, const Substitution& theta);
Sequent apply_subst(const Sequent& s, const Substitution& theta);

/// Applying the result equals applying `first`, then `second`.
Substitution compose(const Substitution& first, const Substitution& second);

/// Rebinds each x_i to y_i. Throws DuplicateOverride on a repeated x_i.
Substitution override(const Substitution& theta,
                      const std::vector<std::pair<std::string, std::string>>& pairs);

/// body[t/x] for a quantified formula Qx.body.
Formula instantiate(const Formula& quantified, const Term& t);

std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string to_string(const Sequent& s);
std::string to_string(const Substitution& theta);

/// Returns base', base'', ... the first one not in `avoid`.
std::string primed_fresh(std::string_view base, const VarSet& avoid);

/// Deterministic supply of fresh variable names: y, z, w, y1, z1, w1, ...
/// always the first candidate not yet used.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(VarSet used) : used_(std::move(used)) {}

  void reserve(const std::string& name) { used_.insert(name); }
  void reserve(const VarSet& names) { used_.insert(names.begin(), names.end()); }
  bool used(const std::string& name) const { return used_.count(name) != 0; }

  std::string next();

 private:
  VarSet used_;
};

// ---------------------------------------------------------------------------
// Signature and inductive definitions

struct PredicateInfo {
  std::size_t arity = 0;
  bool inductive = false;
};

struct Signature {
  std::map<std::string, std::size_t> functions;
  std::map<std::string, PredicateInfo> predicates;

  bool is_function(const std::string& name) const { return functions.count(name) != 0; }
  bool is_predicate(const std::string& name) const { return predicates.count(name) != 0; }
};

/// head(args) <- body. `params` lists every variable of the production in
/// first-occurrence order (head first); case distinctions rename them.
struct Production {
  std::string predicate;
  std::vector<std::string> params;
  std::vector<Term> head_args;
  std::vector<Formula> body;

  Formula head() const { return Formula::inductive(predicate, head_args); }
};

class DefinitionSet {
 public:
  DefinitionSet() = default;
  explicit DefinitionSet(Signature sig) : signature_(std::move(sig)) {}

  const Signature& signature() const noexcept { return signature_; }
  Signature& signature() noexcept { return signature_; }

  /// Appends a production; params are recomputed from head and body.
  /// Throws InvalidInput on arity or kind mismatches.
  void add(Production p);

  const std::vector<Production>& productions() const noexcept { return productions_; }
  /// Productions of `pred` in declaration order; the position in this list
  /// is the production index used by proof annotations.
  std::vector<const Production*> productions_of(const std::string& pred) const;

 private:
  Signature signature_;
  std::vector<Production> productions_;
};

}  // namespace cyclop
