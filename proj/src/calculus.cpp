#include "cyclop/calculus.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "cyclop/error.hpp"

namespace cyclop {

namespace {

constexpr std::array<std::string_view, kRuleCount> kNames = {
    "Axiom", "Wk",   "Cut",  "Subst", "NotL", "NotR", "OrL", "OrR",    "AndL", "AndR",   "ImpL",
    "ImpR",  "AllL", "AllR", "ExL",   "ExR",  "EqL",  "EqR", "UL",     "UR",   "FreshL", "ULPrime",
};

[[noreturn]] void malformed(const RuleInstance& inst, const std::string& reason) {
  throw Error(ErrorCode::MalformedInstance, std::string(rule_name(inst.rule)) + ": " + reason);
}

void expect_premises(const RuleInstance& inst, std::size_t n) {
  if (inst.premises.size() != n)
    malformed(inst, "expected " + std::to_string(n) + " premise(s), got " +
                        std::to_string(inst.premises.size()));
}

// The principal formula, checked to be present on the rule's side and of
// the given shape.
const Formula& principal(const RuleInstance& inst, FormulaKind kind) {
  if (!inst.ann.target) malformed(inst, "missing target");
  const Formula& f = *inst.ann.target;
  if (f.kind != kind) malformed(inst, "target " + to_string(f) + " has the wrong shape");
  const bool present = is_left_rule(inst.rule) ? inst.conclusion.in_antecedent(f)
                                               : inst.conclusion.in_succedent(f);
  if (!present) malformed(inst, "target " + to_string(f) + " not in the conclusion");
  return f;
}

std::vector<Formula> without(const std::vector<Formula>& fs, const Formula* drop) {
  std::vector<Formula> out;
  out.reserve(fs.size());
  const std::string key = drop ? alpha_key(*drop) : std::string();
  for (const auto& f : fs)
    if (!drop || alpha_key(f) != key) out.push_back(f);
  return out;
}

Sequent extend(const Sequent& base, const Formula* drop_left, const Formula* drop_right,
               const std::vector<Formula>& add_left, const std::vector<Formula>& add_right) {
  auto ante = without(base.antecedent(), drop_left);
  auto succ = without(base.succedent(), drop_right);
  ante.insert(ante.end(), add_left.begin(), add_left.end());
  succ.insert(succ.end(), add_right.begin(), add_right.end());
  return Sequent(std::move(ante), std::move(succ));
}

// Premise shape for a rule whose principal formula is either dropped from or
// kept in the context; both readings are sound for set-based sequents.
void expect_premise(const RuleInstance& inst, std::size_t i, const Formula& principal_formula,
                    const std::vector<Formula>& add_left, const std::vector<Formula>& add_right) {
  const bool left = is_left_rule(inst.rule);
  const Formula* p = &principal_formula;
  const Sequent dropped =
      extend(inst.conclusion, left ? p : nullptr, left ? nullptr : p, add_left, add_right);
  if (inst.premises[i] == dropped) return;
  const Sequent kept = extend(inst.conclusion, nullptr, nullptr, add_left, add_right);
  if (inst.premises[i] == kept) return;
  malformed(inst, "premise " + std::to_string(i) + " is " + to_string(inst.premises[i]) +
                      ", expected " + to_string(dropped));
}

std::vector<TracePair> identical_pairs(const Sequent& concl, const Sequent& prem) {
  std::vector<TracePair> out;
  const auto slots = concl.inductive_slots();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const std::size_t j = prem.slot_of(concl.antecedent()[slots[i]]);
    if (j != Sequent::npos) out.push_back({i, j, false});
  }
  return out;
}

void normalize(std::vector<TracePair>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  // A progressing pair subsumes its non-progressing twin.
  std::vector<TracePair> out;
  for (const auto& p : pairs) {
    if (!out.empty() && out.back().from == p.from && out.back().to == p.to)
      out.back().progress = out.back().progress || p.progress;
    else
      out.push_back(p);
  }
  pairs = std::move(out);
}

bool match(const Term& pattern, const Term& t, std::map<std::string, Term>& sigma) {
  if (pattern.is_var()) {
    auto [it, inserted] = sigma.emplace(pattern.name, t);
    return inserted || it->second == t;
  }
  if (t.is_var() || t.name != pattern.name || t.args.size() != pattern.args.size()) return false;
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (!match(pattern.args[i], t.args[i], sigma)) return false;
  return true;
}

VarSet head_vars(const Production& p) {
  VarSet out;
  for (const auto& t : p.head_args) collect_vars(t, out);
  return out;
}

std::vector<std::string> body_only_params(const Production& p) {
  const VarSet head = head_vars(p);
  std::vector<std::string> out;
  for (const auto& v : p.params)
    if (head.count(v) == 0) out.push_back(v);
  return out;
}

std::vector<const Production*> productions_for(const RuleInstance& inst, const Formula& atom,
                                               const DefinitionSet& defs) {
  auto it = defs.signature().predicates.find(atom.symbol);
  if (it == defs.signature().predicates.end() || !it->second.inductive)
    throw Error(ErrorCode::UnknownPredicate,
                std::string(rule_name(inst.rule)) + ": " + atom.symbol + " is not inductive");
  return defs.productions_of(atom.symbol);
}

void check_fresh_vector(const RuleInstance& inst, const std::vector<std::string>& names,
                        const VarSet& taken) {
  VarSet seen;
  for (const auto& y : names) {
    if (!seen.insert(y).second) malformed(inst, "fresh variable " + y + " repeated");
    if (taken.count(y)) malformed(inst, "fresh variable " + y + " occurs in the conclusion");
  }
}

std::vector<Formula> instantiate_body(const Production& p, const Substitution& sigma) {
  std::vector<Formula> out;
  out.reserve(p.body.size());
  for (const auto& b : p.body) out.push_back(apply_subst(b, sigma));
  return out;
}

Substitution rename_to(const std::vector<std::string>& from, const std::vector<std::string>& to) {
  std::map<std::string, Term> m;
  for (std::size_t i = 0; i < from.size(); ++i) m.emplace(from[i], Term::var(to[i]));
  return Substitution(std::move(m));
}

// Progress pairs from the unfolded principal slot to every inductive body
// atom of the case.
void add_unfold_pairs(std::vector<TracePair>& pairs, const Sequent& concl, const Sequent& prem,
                      const Formula& principal_formula, const std::vector<Formula>& body) {
  const std::size_t from = concl.slot_of(principal_formula);
  for (const auto& b : body) {
    if (!b.is_inductive_atom()) continue;
    const std::size_t to = prem.slot_of(b);
    if (to != Sequent::npos) pairs.push_back({from, to, true});
  }
}

OccurrenceMap check_ul(const RuleInstance& inst, const DefinitionSet& defs) {
  const Formula& p = principal(inst, FormulaKind::PredI);
  const auto prods = productions_for(inst, p, defs);
  expect_premises(inst, prods.size());
  if (inst.ann.fresh.size() != prods.size())
    malformed(inst, "expected one fresh vector per production");
  const VarSet taken = free_vars(inst.conclusion);
  OccurrenceMap occ;
  for (std::size_t k = 0; k < prods.size(); ++k) {
    const Production& prod = *prods[k];
    const auto& ys = inst.ann.fresh[k];
    if (ys.size() != prod.params.size())
      malformed(inst, "fresh vector " + std::to_string(k) + " has the wrong length");
    check_fresh_vector(inst, ys, taken);
    const Substitution sigma = rename_to(prod.params, ys);
    std::vector<Formula> added;
    for (std::size_t l = 0; l < p.args.size(); ++l)
      added.push_back(Formula::equal(p.args[l], apply_subst(prod.head_args[l], sigma)));
    const auto body = instantiate_body(prod, sigma);
    added.insert(added.end(), body.begin(), body.end());
    expect_premise(inst, k, p, added, {});
    auto pairs = identical_pairs(inst.conclusion, inst.premises[k]);
    add_unfold_pairs(pairs, inst.conclusion, inst.premises[k], p, body);
    occ.pairs.push_back(std::move(pairs));
  }
  return occ;
}

OccurrenceMap check_ul_prime(const RuleInstance& inst, const DefinitionSet& defs) {
  const Formula& p = principal(inst, FormulaKind::PredI);
  const auto prods = productions_for(inst, p, defs);
  expect_premises(inst, prods.size());
  if (inst.ann.fresh.size() != prods.size())
    malformed(inst, "expected one fresh vector per production");
  const VarSet taken = free_vars(inst.conclusion);
  OccurrenceMap occ;
  for (std::size_t k = 0; k < prods.size(); ++k) {
    const Production& prod = *prods[k];
    std::map<std::string, Term> sigma;
    for (std::size_t l = 0; l < p.args.size(); ++l)
      if (!match(prod.head_args[l], p.args[l], sigma))
        malformed(inst, "production " + std::to_string(k) + " head does not match " + to_string(p));
    const auto extra = body_only_params(prod);
    const auto& ys = inst.ann.fresh[k];
    if (ys.size() != extra.size())
      malformed(inst, "fresh vector " + std::to_string(k) + " has the wrong length");
    check_fresh_vector(inst, ys, taken);
    for (std::size_t l = 0; l < extra.size(); ++l) sigma.emplace(extra[l], Term::var(ys[l]));
    const auto body = instantiate_body(prod, Substitution(std::move(sigma)));
    expect_premise(inst, k, p, body, {});
    auto pairs = identical_pairs(inst.conclusion, inst.premises[k]);
    add_unfold_pairs(pairs, inst.conclusion, inst.premises[k], p, body);
    occ.pairs.push_back(std::move(pairs));
  }
  return occ;
}

OccurrenceMap check_ur(const RuleInstance& inst, const DefinitionSet& defs) {
  const Formula& p = principal(inst, FormulaKind::PredI);
  const auto prods = productions_for(inst, p, defs);
  if (inst.ann.production >= prods.size()) malformed(inst, "production index out of range");
  const Production& prod = *prods[inst.ann.production];
  std::map<std::string, Term> sigma;
  for (std::size_t l = 0; l < p.args.size(); ++l)
    if (!match(prod.head_args[l], p.args[l], sigma))
      malformed(inst, "production head does not match " + to_string(p));
  const auto extra = body_only_params(prod);
  if (inst.ann.with.size() != extra.size())
    malformed(inst, "expected " + std::to_string(extra.size()) + " 'with' term(s)");
  for (std::size_t l = 0; l < extra.size(); ++l) sigma.emplace(extra[l], inst.ann.with[l]);
  const auto body = instantiate_body(prod, Substitution(std::move(sigma)));
  expect_premises(inst, body.size());
  OccurrenceMap occ;
  for (std::size_t k = 0; k < body.size(); ++k) {
    expect_premise(inst, k, p, {}, {body[k]});
    occ.pairs.push_back(identical_pairs(inst.conclusion, inst.premises[k]));
  }
  return occ;
}

OccurrenceMap check_eq_left(const RuleInstance& inst) {
  const Formula& eq = principal(inst, FormulaKind::Eq);
  expect_premises(inst, 1);
  const auto& a = inst.ann;
  if (!a.tmpl) malformed(inst, "missing template");
  if (a.hole_l.empty() || a.hole_r.empty() || a.hole_l == a.hole_r)
    malformed(inst, "holes must be two distinct variables");
  const Term& t = eq.args[0];
  const Term& u = eq.args[1];
  const Substitution forward({{a.hole_l, t}, {a.hole_r, u}});
  const Substitution backward({{a.hole_l, u}, {a.hole_r, t}});
  const Sequent image = apply_subst(*a.tmpl, forward);
  auto ante = image.antecedent();
  ante.push_back(eq);
  if (Sequent(ante, image.succedent()) != inst.conclusion)
    malformed(inst, "conclusion is not the template instance " + to_string(Sequent(ante, image.succedent())));
  const Sequent prem = apply_subst(*a.tmpl, backward);
  if (inst.premises[0] != prem && inst.premises[0] != extend(prem, nullptr, nullptr, {eq}, {}))
    malformed(inst, "premise is " + to_string(inst.premises[0]) + ", expected " + to_string(prem));
  OccurrenceMap occ;
  occ.pairs.emplace_back();
  for (const auto& f : a.tmpl->antecedent()) {
    if (!f.is_inductive_atom()) continue;
    const std::size_t from = inst.conclusion.slot_of(apply_subst(f, forward));
    const std::size_t to = inst.premises[0].slot_of(apply_subst(f, backward));
    if (from != Sequent::npos && to != Sequent::npos) occ.pairs[0].push_back({from, to, false});
  }
  return occ;
}

OccurrenceMap check_subst(const RuleInstance& inst) {
  expect_premises(inst, 1);
  const Substitution& theta = inst.ann.subst;
  if (apply_subst(inst.premises[0], theta) != inst.conclusion)
    malformed(inst, "conclusion is not the premise under " + to_string(theta));
  OccurrenceMap occ;
  occ.pairs.emplace_back();
  const auto& prem = inst.premises[0];
  const auto slots = prem.inductive_slots();
  for (std::size_t j = 0; j < slots.size(); ++j) {
    const std::size_t i = inst.conclusion.slot_of(apply_subst(prem.antecedent()[slots[j]], theta));
    if (i != Sequent::npos) occ.pairs[0].push_back({i, j, false});
  }
  return occ;
}

void require_eigen(const RuleInstance& inst, const VarSet& avoid) {
  if (!inst.ann.eigen || inst.ann.eigen->empty()) malformed(inst, "missing eigenvariable");
  if (avoid.count(*inst.ann.eigen))
    malformed(inst, "eigenvariable " + *inst.ann.eigen + " is not fresh");
}

OccurrenceMap check_generic(const RuleInstance& inst) {
  const Sequent& c = inst.conclusion;
  const auto& a = inst.ann;
  switch (inst.rule) {
    case RuleId::Axiom: {
      expect_premises(inst, 0);
      const bool shared = std::any_of(c.antecedent().begin(), c.antecedent().end(),
                                      [&](const Formula& f) { return c.in_succedent(f); });
      if (!shared) malformed(inst, "antecedent and succedent are disjoint");
      break;
    }
    case RuleId::EqR: {
      expect_premises(inst, 0);
      auto reflexive = [&](const Formula& f) {
        return f.kind == FormulaKind::Eq && f.args[0] == f.args[1];
      };
      if (a.target) {
        if (!reflexive(*a.target) || !c.in_succedent(*a.target))
          malformed(inst, "target is not a reflexive equality of the succedent");
      } else if (std::none_of(c.succedent().begin(), c.succedent().end(), reflexive)) {
        malformed(inst, "no equality t = t in the succedent");
      }
      break;
    }
    case RuleId::Wk: {
      expect_premises(inst, 1);
      const Sequent& p = inst.premises[0];
      for (const auto& f : p.antecedent())
        if (!c.in_antecedent(f)) malformed(inst, to_string(f) + " not in the conclusion antecedent");
      for (const auto& f : p.succedent())
        if (!c.in_succedent(f)) malformed(inst, to_string(f) + " not in the conclusion succedent");
      break;
    }
    case RuleId::Cut: {
      expect_premises(inst, 2);
      if (!a.cut) malformed(inst, "missing cut formula");
      if (inst.premises[0] != extend(c, nullptr, nullptr, {}, {*a.cut}))
        malformed(inst, "left premise must add the cut formula to the succedent");
      if (inst.premises[1] != extend(c, nullptr, nullptr, {*a.cut}, {}))
        malformed(inst, "right premise must add the cut formula to the antecedent");
      break;
    }
    case RuleId::NotL: {
      const Formula& f = principal(inst, FormulaKind::Not);
      expect_premises(inst, 1);
      expect_premise(inst, 0, f, {}, {f.subs[0]});
      break;
    }
    case RuleId::NotR: {
      const Formula& f = principal(inst, FormulaKind::Not);
      expect_premises(inst, 1);
      expect_premise(inst, 0, f, {f.subs[0]}, {});
      break;
    }
    case RuleId::OrL: {
      const Formula& f = principal(inst, FormulaKind::Or);
      expect_premises(inst, 2);
      expect_premise(inst, 0, f, {f.subs[0]}, {});
      expect_premise(inst, 1, f, {f.subs[1]}, {});
      break;
    }
    case RuleId::OrR: {
      const Formula& f = principal(inst, FormulaKind::Or);
      expect_premises(inst, 1);
      expect_premise(inst, 0, f, {}, {f.subs[0], f.subs[1]});
      break;
    }
    case RuleId::AndL: {
      const Formula& f = principal(inst, FormulaKind::And);
      expect_premises(inst, 1);
      expect_premise(inst, 0, f, {f.subs[0], f.subs[1]}, {});
      break;
    }
    case RuleId::AndR: {
      const Formula& f = principal(inst, FormulaKind::And);
      expect_premises(inst, 2);
      expect_premise(inst, 0, f, {}, {f.subs[0]});
      expect_premise(inst, 1, f, {}, {f.subs[1]});
      break;
    }
    case RuleId::ImpL: {
      const Formula& f = principal(inst, FormulaKind::Imp);
      expect_premises(inst, 2);
      expect_premise(inst, 0, f, {}, {f.subs[0]});
      expect_premise(inst, 1, f, {f.subs[1]}, {});
      break;
    }
    case RuleId::ImpR: {
      const Formula& f = principal(inst, FormulaKind::Imp);
      expect_premises(inst, 1);
      expect_premise(inst, 0, f, {f.subs[0]}, {f.subs[1]});
      break;
    }
    case RuleId::AllL:
    case RuleId::ExR: {
      const bool left = inst.rule == RuleId::AllL;
      const Formula& f = principal(inst, left ? FormulaKind::Forall : FormulaKind::Exists);
      if (!a.term) malformed(inst, "missing witness term");
      expect_premises(inst, 1);
      const Formula body = instantiate(f, *a.term);
      if (left)
        expect_premise(inst, 0, f, {body}, {});
      else
        expect_premise(inst, 0, f, {}, {body});
      break;
    }
    case RuleId::AllR:
    case RuleId::ExL: {
      const bool left = inst.rule == RuleId::ExL;
      const Formula& f = principal(inst, left ? FormulaKind::Exists : FormulaKind::Forall);
      require_eigen(inst, free_vars(c));
      expect_premises(inst, 1);
      const Formula body = instantiate(f, Term::var(*a.eigen));
      if (left)
        expect_premise(inst, 0, f, {body}, {});
      else
        expect_premise(inst, 0, f, {}, {body});
      break;
    }
    case RuleId::FreshL: {
      if (!a.term) malformed(inst, "missing term");
      VarSet avoid = free_vars(c);
      collect_vars(*a.term, avoid);
      require_eigen(inst, avoid);
      expect_premises(inst, 1);
      const Sequent want =
          extend(c, nullptr, nullptr, {Formula::equal(Term::var(*a.eigen), *a.term)}, {});
      if (inst.premises[0] != want) malformed(inst, "premise must be " + to_string(want));
      break;
    }
    default:
      throw std::logic_error("check_generic: unexpected rule");
  }
  OccurrenceMap occ;
  for (const auto& p : inst.premises) occ.pairs.push_back(identical_pairs(c, p));
  return occ;
}

// theta_i for a premise of an eigenvariable rule: theta on the conclusion's
// variables, and premise-only variables sent injectively into X_i minus the
// variables of the instantiated conclusion.
Substitution premise_subst(const Substitution& theta, const VarSet& fv_concl,
                           const VarSet& fv_prem, const VarSet& blocked) {
  VarSet universe = fv_concl;
  universe.insert(fv_prem.begin(), fv_prem.end());
  std::vector<std::string> candidates;
  for (const auto& v : universe)
    if (blocked.count(v) == 0) candidates.push_back(v);
  std::vector<std::string> own;
  for (const auto& v : fv_prem)
    if (fv_concl.count(v) == 0) own.push_back(v);

  VarSet taken;
  std::map<std::string, std::string> target;
  for (const auto& v : own)
    if (blocked.count(v) == 0) {
      target[v] = v;
      taken.insert(v);
    }
  auto next = candidates.begin();
  for (const auto& v : own) {
    if (target.count(v)) continue;
    while (next != candidates.end() && taken.count(*next)) ++next;
    // #candidates >= #own because theta is atomic.
    if (next == candidates.end()) throw std::logic_error("premise_subst: candidates exhausted");
    target[v] = *next;
    taken.insert(*next);
  }
  std::vector<std::pair<std::string, std::string>> pairs(target.begin(), target.end());
  return override(theta, pairs);
}

std::string rename_var(const std::string& v, const Substitution& theta) {
  const Term t = theta(v);
  if (!t.is_var()) throw std::logic_error("rename_var: eigenvariable mapped to a non-variable");
  return t.name;
}

}  // namespace

std::string_view rule_name(RuleId r) { return kNames[static_cast<std::size_t>(r)]; }

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<RuleId>(i);
  return std::nullopt;
}

bool is_left_rule(RuleId r) {
  switch (r) {
    case RuleId::NotL:
    case RuleId::OrL:
    case RuleId::AndL:
    case RuleId::ImpL:
    case RuleId::AllL:
    case RuleId::ExL:
    case RuleId::EqL:
    case RuleId::UL:
    case RuleId::ULPrime: return true;
    default: return false;
  }
}

bool introduces_fresh(RuleId r) {
  switch (r) {
    case RuleId::AllR:
    case RuleId::ExL:
    case RuleId::UL:
    case RuleId::ULPrime:
    case RuleId::FreshL: return true;
    default: return false;
  }
}

RuleSet RuleSet::full() {
  RuleSet s;
  for (std::size_t i = 0; i < kRuleCount; ++i) s.enable(static_cast<RuleId>(i));
  return s.disable(RuleId::FreshL).disable(RuleId::ULPrime);
}

RuleSet RuleSet::cutfree() { return full().disable(RuleId::Cut); }

RuleSet RuleSet::freshl() { return cutfree().enable(RuleId::FreshL); }

RuleSet RuleSet::section4() {
  RuleSet s;
  for (RuleId r : {RuleId::ULPrime, RuleId::UR, RuleId::Axiom, RuleId::Wk, RuleId::Subst})
    s.enable(r);
  return s;
}

std::optional<RuleSet> RuleSet::preset(std::string_view name) {
  if (name == "full") return full();
  if (name == "cutfree") return cutfree();
  if (name == "freshl") return freshl();
  if (name == "section4") return section4();
  return std::nullopt;
}

std::vector<RuleId> RuleSet::rules() const {
  std::vector<RuleId> out;
  for (std::size_t i = 0; i < kRuleCount; ++i)
    if (bits_.test(i)) out.push_back(static_cast<RuleId>(i));
  return out;
}

std::size_t slot_count(const Sequent& s) { return s.inductive_slots().size(); }

const Formula& slot_formula(const Sequent& s, std::size_t slot) {
  return s.antecedent()[s.inductive_slots().at(slot)];
}

OccurrenceMap check_rule_instance(const RuleInstance& inst, const DefinitionSet& defs,
                                  const RuleSet& rules) {
  if (!rules.contains(inst.rule))
    throw Error(ErrorCode::RuleDisabled, std::string(rule_name(inst.rule)) + " is not enabled");
  OccurrenceMap occ;
  switch (inst.rule) {
    case RuleId::UL: occ = check_ul(inst, defs); break;
    case RuleId::ULPrime: occ = check_ul_prime(inst, defs); break;
    case RuleId::UR: occ = check_ur(inst, defs); break;
    case RuleId::EqL: occ = check_eq_left(inst); break;
    case RuleId::Subst: occ = check_subst(inst); break;
    default: occ = check_generic(inst); break;
  }
  for (auto& pairs : occ.pairs) normalize(pairs);
  return occ;
}

SubstApplication subst_apply_rule(const RuleInstance& inst, const Substitution& theta,
                                  const DefinitionSet& defs) {
  (void)defs;
  if (inst.rule == RuleId::Subst)
    throw Error(ErrorCode::RuleIsSubst, "substitution application is undefined for Subst");
  if (classify(theta) != SubstKind::Atomic)
    throw Error(ErrorCode::CompositeSubstitution, "composite substitution " + to_string(theta));

  SubstApplication out;
  RuleInstance& r = out.instance;
  r.rule = inst.rule;
  r.conclusion = apply_subst(inst.conclusion, theta);
  const VarSet fv_concl = free_vars(inst.conclusion);
  const VarSet blocked = free_vars(r.conclusion);
  for (const auto& p : inst.premises) {
    const Substitution ti = introduces_fresh(inst.rule)
                                ? premise_subst(theta, fv_concl, free_vars(p), blocked)
                                : theta;
    r.premises.push_back(apply_subst(p, ti));
    out.premise_substs.push_back(ti);
  }

  const Annotation& a = inst.ann;
  Annotation& b = r.ann;
  if (a.target) b.target = apply_subst(*a.target, theta);
  if (a.cut) b.cut = apply_subst(*a.cut, theta);
  b.production = a.production;
  for (const auto& w : a.with) b.with.push_back(apply_subst(w, theta));

  const Substitution& first = out.premise_substs.empty() ? theta : out.premise_substs.front();
  if (a.term) b.term = apply_subst(*a.term, inst.rule == RuleId::FreshL ? first : theta);
  if (a.eigen) {
    const bool used = !inst.premises.empty() && free_vars(inst.premises[0]).count(*a.eigen);
    if (used)
      b.eigen = rename_var(*a.eigen, first);
    else
      b.eigen = blocked.count(*a.eigen) ? primed_fresh(*a.eigen, blocked) : *a.eigen;
  }
  for (std::size_t k = 0; k < a.fresh.size(); ++k) {
    b.fresh.emplace_back();
    for (const auto& y : a.fresh[k]) b.fresh.back().push_back(rename_var(y, out.premise_substs[k]));
  }
  if (a.tmpl) {
    // Holes must stay outside theta's reach.
    VarSet avoid = free_vars(*a.tmpl);
    for (const auto& [x, t] : theta.bindings()) {
      avoid.insert(x);
      collect_vars(t, avoid);
    }
    if (a.target)
      for (const auto& t : a.target->args) collect_vars(t, avoid);
    auto fresh_hole = [&](const std::string& h) {
      const bool clash = theta.binds(h) || [&] {
        for (const auto& [x, t] : theta.bindings())
          if (t.is_var() && t.name == h) return true;
        return false;
      }();
      if (!clash) return h;
      std::string n = primed_fresh(h, avoid);
      avoid.insert(n);
      return n;
    };
    b.hole_l = fresh_hole(a.hole_l);
    b.hole_r = fresh_hole(a.hole_r);
    const Sequent renamed = apply_subst(
        *a.tmpl, Substitution({{a.hole_l, Term::var(b.hole_l)}, {a.hole_r, Term::var(b.hole_r)}}));
    b.tmpl = apply_subst(renamed, theta);
  } else {
    b.hole_l = a.hole_l;
    b.hole_r = a.hole_r;
  }
  b.subst = a.subst;
  return out;
}

CaseSplit build_case_distinctions(const Sequent& seq, const Formula& occ,
                                  const DefinitionSet& defs, FreshNames& fresh) {
  auto it = defs.signature().predicates.find(occ.symbol);
  if (!occ.is_inductive_atom() || it == defs.signature().predicates.end() || !it->second.inductive)
    throw Error(ErrorCode::UnknownPredicate, occ.symbol + " is not an inductive predicate");
  if (!seq.in_antecedent(occ))
    throw Error(ErrorCode::MalformedInstance, to_string(occ) + " is not in the antecedent");
  fresh.reserve(free_vars(seq));
  CaseSplit out;
  for (const Production* prod : defs.productions_of(occ.symbol)) {
    std::vector<std::string> ys;
    for (std::size_t l = 0; l < prod->params.size(); ++l) ys.push_back(fresh.next());
    const Substitution sigma = rename_to(prod->params, ys);
    std::vector<Formula> added;
    for (std::size_t l = 0; l < occ.args.size(); ++l)
      added.push_back(Formula::equal(occ.args[l], apply_subst(prod->head_args[l], sigma)));
    for (const auto& b : instantiate_body(*prod, sigma)) added.push_back(b);
    out.premises.push_back(extend(seq, &occ, nullptr, added, {}));
    out.fresh.push_back(std::move(ys));
  }
  return out;
}

}  // namespace cyclop
