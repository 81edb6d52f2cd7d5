#pragma once

// Random valid rule instances over the even/odd definitions, for exercising
// substitution application. Variables come from a small pool so that
// substitutions collide with eigenvariables and case-split names.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "cyclop/calculus.hpp"
#include "cyclop/proofio.hpp"
#include "cyclop/psc.hpp"

namespace cyclop::test {

inline DefinitionSet even_odd() {
  Signature sig;
  sig.functions = {{"0", 0}, {"s", 1}};
  sig.predicates = {{"N", {1, true}}, {"E", {1, true}}, {"O", {1, true}}, {"Q", {1, false}},
                    {"R", {2, false}}};
  DefinitionSet defs(sig);
  auto atom = [&](const char* text) { return parse_formula(sig, text); };
  auto add = [&](const char* head, std::vector<const char*> body) {
    Production p;
    const Formula h = atom(head);
    p.predicate = h.symbol;
    p.head_args = h.args;
    for (const char* b : body) p.body.push_back(atom(b));
    defs.add(std::move(p));
  };
  add("N(0)", {});
  add("N(s(x))", {"N(x)"});
  add("E(0)", {});
  add("E(s(x))", {"O(x)"});
  add("O(s(x))", {"E(x)"});
  return defs;
}

class InstanceGen {
 public:
  InstanceGen(const DefinitionSet& defs, std::uint32_t seed) : defs_(defs), rng_(seed) {}

  std::string var() { return pool_[rng_() % pool_.size()]; }

  Term atomic_term() { return rng_() % 5 == 0 ? Term::app("0") : Term::var(var()); }

  Term term() { return rng_() % 3 == 0 ? Term::app("s", {atomic_term()}) : atomic_term(); }

  Formula atom() {
    switch (rng_() % 5) {
      case 0: return Formula::inductive("N", {term()});
      case 1: return Formula::inductive("E", {term()});
      case 2: return Formula::inductive("O", {term()});
      case 3: return Formula::ordinary("Q", {term()});
      default: return Formula::ordinary("R", {term(), term()});
    }
  }

  std::vector<Formula> context(std::size_t max) {
    std::vector<Formula> out;
    const std::size_t n = rng_() % (max + 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(atom());
    return out;
  }

  Substitution atomic_subst() {
    std::map<std::string, Term> m;
    for (const auto& v : pool_)
      if (rng_() % 2) m.emplace(v, atomic_term());
    return Substitution(std::move(m));
  }

  RuleInstance instance() {
    for (;;) {
      RuleInstance r = attempt();
      try {
        check_rule_instance(r, defs_, RuleSet::full().enable(RuleId::FreshL));
        return r;
      } catch (const std::exception&) {
        // Some random draws collide, e.g. a fresh name that is free after all.
      }
    }
  }

 private:
  static std::vector<Formula> plus(std::vector<Formula> v, std::vector<Formula> more) {
    v.insert(v.end(), more.begin(), more.end());
    return v;
  }

  std::string fresh_for(const Sequent& s) {
    const VarSet used = free_vars(s);
    for (int i = 0; i < 8; ++i) {
      const std::string v = var();
      if (!used.count(v)) return v;
    }
    return primed_fresh("y", used);
  }

  RuleInstance attempt() {
    RuleInstance r;
    auto g = context(2);
    auto d = context(2);
    const Formula a = atom();
    const Formula b = atom();
    switch (rng_() % 21) {
      case 0:
        r.rule = RuleId::Axiom;
        r.conclusion = Sequent(plus(g, {a}), plus(d, {a}));
        break;
      case 1:
        r.rule = RuleId::Wk;
        r.conclusion = Sequent(plus(g, {a}), plus(d, {b}));
        r.premises = {Sequent(g, d)};
        break;
      case 2:
        r.rule = RuleId::Cut;
        r.ann.cut = a;
        r.conclusion = Sequent(g, d);
        r.premises = {Sequent(g, plus(d, {a})), Sequent(plus(g, {a}), d)};
        break;
      case 3: {
        r.rule = RuleId::OrR;
        const Formula f = Formula::disjunction(a, b);
        r.ann.target = f;
        r.conclusion = Sequent(g, plus(d, {f}));
        r.premises = {Sequent(g, plus(d, {a, b}))};
        break;
      }
      case 4: {
        r.rule = RuleId::AndL;
        const Formula f = Formula::conjunction(a, b);
        r.ann.target = f;
        r.conclusion = Sequent(plus(g, {f}), d);
        r.premises = {Sequent(plus(g, {a, b}), d)};
        break;
      }
      case 5: {
        r.rule = RuleId::ImpL;
        const Formula f = Formula::implication(a, b);
        r.ann.target = f;
        r.conclusion = Sequent(plus(g, {f}), d);
        r.premises = {Sequent(g, plus(d, {a})), Sequent(plus(g, {b}), d)};
        break;
      }
      case 6: {
        r.rule = RuleId::AllL;
        const std::string x = var();
        const Formula f = Formula::forall(x, Formula::inductive("N", {Term::var(x)}));
        r.ann.target = f;
        r.ann.term = term();
        r.conclusion = Sequent(plus(g, {f}), d);
        r.premises = {Sequent(plus(g, {instantiate(f, *r.ann.term)}), d)};
        break;
      }
      case 7:
      case 8: {
        const bool left = rng_() % 2;
        r.rule = left ? RuleId::ExL : RuleId::AllR;
        const std::string x = var();
        const Formula body = Formula::ordinary("R", {Term::var(x), term()});
        const Formula f = left ? Formula::exists(x, body) : Formula::forall(x, body);
        r.ann.target = f;
        r.conclusion = left ? Sequent(plus(g, {f}), d) : Sequent(g, plus(d, {f}));
        r.ann.eigen = fresh_for(r.conclusion);
        const Formula inst = instantiate(f, Term::var(*r.ann.eigen));
        r.premises = {left ? Sequent(plus(g, {inst}), d) : Sequent(g, plus(d, {inst}))};
        break;
      }
      case 9:
      case 10: {
        r.rule = RuleId::UL;
        const Formula p = Formula::inductive(rng_() % 2 ? "N" : "E", {term()});
        r.ann.target = p;
        r.conclusion = Sequent(plus(g, {p}), d);
        FreshNames names;
        for (const auto& v : pool_)
          if (rng_() % 2) names.reserve(v);
        const CaseSplit split = build_case_distinctions(r.conclusion, p, defs_, names);
        r.premises = split.premises;
        r.ann.fresh = split.fresh;
        break;
      }
      case 11: {
        r.rule = RuleId::UR;
        const Term t = atomic_term();
        const Formula p = Formula::inductive("E", {Term::app("s", {t})});
        r.ann.target = p;
        r.ann.production = 1;
        r.conclusion = Sequent(g, plus(d, {p}));
        r.premises = {Sequent(g, plus(d, {Formula::inductive("O", {t})}))};
        break;
      }
      case 12: {
        r.rule = RuleId::EqL;
        const Term t = atomic_term();
        const Term u = term();
        r.ann.hole_l = "h";
        r.ann.hole_r = "k";
        const Sequent tmpl(plus(g, {Formula::inductive("N", {Term::var("h")})}),
                           plus(d, {Formula::ordinary("R", {Term::var("h"), Term::var("k")})}));
        r.ann.tmpl = tmpl;
        const Formula eq = Formula::equal(t, u);
        r.ann.target = eq;
        const Substitution fwd({{"h", t}, {"k", u}});
        const Substitution bwd({{"h", u}, {"k", t}});
        const Sequent image = apply_subst(tmpl, fwd);
        r.conclusion = Sequent(plus(image.antecedent(), {eq}), image.succedent());
        r.premises = {apply_subst(tmpl, bwd)};
        break;
      }
      case 14: {
        r.rule = RuleId::OrL;
        const Formula f = Formula::disjunction(a, b);
        r.ann.target = f;
        r.conclusion = Sequent(plus(g, {f}), d);
        r.premises = {Sequent(plus(g, {a}), d), Sequent(plus(g, {b}), d)};
        break;
      }
      case 15: {
        r.rule = RuleId::AndR;
        const Formula f = Formula::conjunction(a, b);
        r.ann.target = f;
        r.conclusion = Sequent(g, plus(d, {f}));
        r.premises = {Sequent(g, plus(d, {a})), Sequent(g, plus(d, {b}))};
        break;
      }
      case 16: {
        r.rule = RuleId::NotL;
        const Formula f = Formula::negation(a);
        r.ann.target = f;
        r.conclusion = Sequent(plus(g, {f}), d);
        r.premises = {Sequent(g, plus(d, {a}))};
        break;
      }
      case 17: {
        r.rule = RuleId::NotR;
        const Formula f = Formula::negation(a);
        r.ann.target = f;
        r.conclusion = Sequent(g, plus(d, {f}));
        r.premises = {Sequent(plus(g, {a}), d)};
        break;
      }
      case 18: {
        r.rule = RuleId::ImpR;
        const Formula f = Formula::implication(a, b);
        r.ann.target = f;
        r.conclusion = Sequent(g, plus(d, {f}));
        r.premises = {Sequent(plus(g, {a}), plus(d, {b}))};
        break;
      }
      case 19: {
        r.rule = RuleId::ExR;
        const std::string x = var();
        const Formula f = Formula::exists(x, Formula::ordinary("R", {Term::var(x), term()}));
        r.ann.target = f;
        r.ann.term = term();
        r.conclusion = Sequent(g, plus(d, {f}));
        r.premises = {Sequent(g, plus(d, {instantiate(f, *r.ann.term)}))};
        break;
      }
      case 20: {
        r.rule = RuleId::EqR;
        const Term t = term();
        r.ann.target = Formula::equal(t, t);
        r.conclusion = Sequent(g, plus(d, {*r.ann.target}));
        break;
      }
      default: {
        r.rule = RuleId::FreshL;
        r.conclusion = Sequent(g, d);
        r.ann.term = term();
        VarSet avoid = free_vars(r.conclusion);
        collect_vars(*r.ann.term, avoid);
        r.ann.eigen = primed_fresh("v", avoid);
        r.premises = {Sequent(plus(g, {Formula::equal(Term::var(*r.ann.eigen), *r.ann.term)}), d)};
        break;
      }
    }
    return r;
  }

  const DefinitionSet& defs_;
  std::mt19937 rng_;
  const std::vector<std::string> pool_{"x", "y", "z", "w"};
};

/// theta_i in psc({theta}, xs), shown by replaying a witness: theta_i is
/// theta with variables of xs rebound to variables of xs. For small xs the
/// full closure is also computed and must contain theta_i.
inline bool in_premise_closure(const Substitution& theta, const Substitution& theta_i,
                               const VarSet& xs) {
  std::vector<std::pair<std::string, std::string>> pairs;
  VarSet touched = theta.domain();
  const VarSet more = theta_i.domain();
  touched.insert(more.begin(), more.end());
  for (const auto& v : touched) {
    const Term t = theta_i(v);
    if (t == theta(v)) continue;
    if (!xs.count(v) || !t.is_var() || !xs.count(t.name)) return false;
    pairs.emplace_back(v, t.name);
  }
  if (override(theta, pairs) != theta_i) return false;
  if (xs.size() > 4) return true;
  const ClosureInput in{{theta}, xs};
  const Closure c = psc(in);
  return replay_witnesses(c, in) && c.contains(theta_i);
}

/// Trace preservation: every pair of `before` maps to a pair of `after`
/// whose progress flag is at least as strong, through the substituted slot
/// formulas. Slots merged by theta may strengthen a pair, never weaken it.
inline bool traces_preserved(const RuleInstance& before, const OccurrenceMap& occ_before,
                             const SubstApplication& app, const Substitution& theta,
                             const OccurrenceMap& occ_after) {
  const RuleInstance& after = app.instance;
  for (std::size_t i = 0; i < occ_before.pairs.size(); ++i) {
    for (const auto& p : occ_before.pairs[i]) {
      const std::size_t from =
          after.conclusion.slot_of(apply_subst(slot_formula(before.conclusion, p.from), theta));
      const std::size_t to = after.premises[i].slot_of(
          apply_subst(slot_formula(before.premises[i], p.to), app.premise_substs[i]));
      const auto& have = occ_after.pairs[i];
      const bool found = std::any_of(have.begin(), have.end(), [&](const TracePair& q) {
        return q.from == from && q.to == to && (q.progress || !p.progress);
      });
      if (!found) return false;
    }
  }
  return true;
}

}  // namespace cyclop::test
