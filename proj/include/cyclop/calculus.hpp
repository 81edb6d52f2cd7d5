#pragma once

// Inference rules, rule-instance checking, trace occurrence maps, and the
// re-instantiation of a rule instance under an atomic substitution.

#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclop/syntax.hpp"

namespace cyclop {

enum class RuleId : std::uint8_t {
  Axiom, Wk, Cut, Subst,
  NotL, NotR, OrL, OrR, AndL, AndR, ImpL, ImpR,
  AllL, AllR, ExL, ExR, EqL, EqR,
  UL, UR, FreshL, ULPrime,
};

inline constexpr std::size_t kRuleCount = 22;

std::string_view rule_name(RuleId r);
std::optional<RuleId> rule_from_name(std::string_view name);

/// True for rules whose principal formula lives in the antecedent.
bool is_left_rule(RuleId r);
/// Rules that introduce eigenvariables in some premise.
bool introduces_fresh(RuleId r);

class RuleSet {
 public:
  RuleSet() = default;

  static RuleSet full();
  static RuleSet cutfree();
  /// cutfree plus (FreshL).
  static RuleSet freshl();
  /// (ULPrime), (UR), (Axiom), (Wk), (Subst) only.
  static RuleSet section4();
  static std::optional<RuleSet> preset(std::string_view name);

  RuleSet& enable(RuleId r) {
    bits_.set(static_cast<std::size_t>(r));
    return *this;
  }
  RuleSet& disable(RuleId r) {
    bits_.reset(static_cast<std::size_t>(r));
    return *this;
  }
  bool contains(RuleId r) const { return bits_.test(static_cast<std::size_t>(r)); }
  bool allow_cut() const { return contains(RuleId::Cut); }
  bool allow_subst() const { return contains(RuleId::Subst); }

  std::vector<RuleId> rules() const;

  friend bool operator==(const RuleSet&, const RuleSet&) = default;

 private:
  std::bitset<kRuleCount> bits_;
};

/// Rule-specific data. Only the fields relevant to the rule are read.
struct Annotation {
  /// Principal formula: antecedent for left rules (the equality for EqL),
  /// succedent for right rules.
  std::optional<Formula> target;
  std::optional<Formula> cut;
  Substitution subst;
  /// Witness term of AllL / ExR, the right side of FreshL's equality.
  std::optional<Term> term;
  /// Eigenvariable of AllR / ExL / FreshL.
  std::optional<std::string> eigen;
  /// EqL: the conclusion is tmpl[t/hole_l, u/hole_r] plus t = u, the premise
  /// is tmpl[u/hole_l, t/hole_r].
  std::string hole_l;
  std::string hole_r;
  std::optional<Sequent> tmpl;
  /// UL: per production, the fresh names for its params. ULPrime: per
  /// production, fresh names for its body-only params.
  std::vector<std::vector<std::string>> fresh;
  /// UR: production index among the productions of the target predicate.
  std::size_t production = 0;
  /// UR: instances for body-only params, in params order.
  std::vector<Term> with;
};

struct RuleInstance {
  RuleId rule = RuleId::Axiom;
  Sequent conclusion;
  std::vector<Sequent> premises;
  Annotation ann;
};

/// A trace step between antecedent inductive-atom slots. Slots index the
/// inductive atoms of a sequent in canonical antecedent order.
struct TracePair {
  std::size_t from = 0;
  std::size_t to = 0;
  bool progress = false;

  friend bool operator==(const TracePair&, const TracePair&) = default;
  friend auto operator<=>(const TracePair&, const TracePair&) = default;
};

struct OccurrenceMap {
  /// pairs[i]: conclusion slot to slot of premise i, sorted and unique.
  std::vector<std::vector<TracePair>> pairs;
};

/// Number of trace slots of a sequent.
std::size_t slot_count(const Sequent& s);
/// The inductive atom at a slot.
const Formula& slot_formula(const Sequent& s, std::size_t slot);

/// Throws RuleDisabled, UnknownPredicate or MalformedInstance.
OccurrenceMap check_rule_instance(const RuleInstance& inst, const DefinitionSet& defs,
                                  const RuleSet& rules);

struct SubstApplication {
  RuleInstance instance;
  /// theta_i per premise, each in psc({theta}, FV(premise_i) u FV(conclusion)).
  std::vector<Substitution> premise_substs;
};

/// Instantiates `inst` under an atomic theta. Throws CompositeSubstitution
/// or RuleIsSubst.
SubstApplication subst_apply_rule(const RuleInstance& inst, const Substitution& theta,
                                  const DefinitionSet& defs);

struct CaseSplit {
  std::vector<Sequent> premises;
  std::vector<std::vector<std::string>> fresh;
};

/// UL premises for unfolding `occ`, principal dropped. Names are drawn from
/// `fresh` after reserving FV(seq). Throws UnknownPredicate.
CaseSplit build_case_distinctions(const Sequent& seq, const Formula& occ,
                                  const DefinitionSet& defs, FreshNames& fresh);

}  // namespace cyclop
