#include "cyclop/syntax.hpp"

#include <algorithm>
#include <numeric>

#include "cyclop/error.hpp"

namespace cyclop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateOverride: return "DuplicateOverride";
    case ErrorCode::CompositeBase: return "CompositeBase";
    case ErrorCode::CompositeSubstitution: return "CompositeSubstitution";
    case ErrorCode::RuleIsSubst: return "RuleIsSubst";
    case ErrorCode::RuleDisabled: return "RuleDisabled";
    case ErrorCode::MalformedInstance: return "MalformedInstance";
    case ErrorCode::UnknownPredicate: return "UnknownPredicate";
    case ErrorCode::InvalidRule: return "InvalidRule";
    case ErrorCode::BudMismatch: return "BudMismatch";
    case ErrorCode::DanglingCompanion: return "DanglingCompanion";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::RuleSetTooWeak: return "RuleSetTooWeak";
    case ErrorCode::DepthCapExceeded: return "DepthCapExceeded";
    case ErrorCode::NoRepeatFound: return "NoRepeatFound";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// Terms

Term Term::var(std::string name) { return Term{Kind::Var, std::move(name), {}}; }

Term Term::app(std::string fun, std::vector<Term> args) {
  return Term{Kind::App, std::move(fun), std::move(args)};
}

bool operator==(const Term& a, const Term& b) {
  return a.kind == b.kind && a.name == b.name && a.args == b.args;
}

bool operator<(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.name != b.name) return a.name < b.name;
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(),
                                      b.args.end());
}

void collect_vars(const Term& t, VarSet& out) {
  if (t.is_var()) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

VarSet free_vars(const Term& t) {
  VarSet out;
  collect_vars(t, out);
  return out;
}

Term apply_subst(const Term& t, const Substitution& theta) {
  if (t.is_var()) return theta(t.name);
  Term out = Term::app(t.name);
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(apply_subst(a, theta));
  return out;
}

std::string to_string(const Term& t) {
  if (t.is_var() || t.args.empty()) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.args[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Formulas

Formula Formula::inductive(std::string pred, std::vector<Term> args) {
  return Formula{FormulaKind::PredI, std::move(pred), std::move(args), {}};
}
Formula Formula::ordinary(std::string pred, std::vector<Term> args) {
  return Formula{FormulaKind::PredO, std::move(pred), std::move(args), {}};
}
Formula Formula::equal(Term lhs, Term rhs) {
  return Formula{FormulaKind::Eq, {}, {std::move(lhs), std::move(rhs)}, {}};
}
Formula Formula::negation(Formula f) { return Formula{FormulaKind::Not, {}, {}, {std::move(f)}}; }
Formula Formula::disjunction(Formula a, Formula b) {
  return Formula{FormulaKind::Or, {}, {}, {std::move(a), std::move(b)}};
}
Formula Formula::conjunction(Formula a, Formula b) {
  return Formula{FormulaKind::And, {}, {}, {std::move(a), std::move(b)}};
}
Formula Formula::implication(Formula a, Formula b) {
  return Formula{FormulaKind::Imp, {}, {}, {std::move(a), std::move(b)}};
}
Formula Formula::exists(std::string var, Formula body) {
  return Formula{FormulaKind::Exists, std::move(var), {}, {std::move(body)}};
}
Formula Formula::forall(std::string var, Formula body) {
  return Formula{FormulaKind::Forall, std::move(var), {}, {std::move(body)}};
}

namespace {

int level(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Exists:
    case FormulaKind::Forall: return 0;
    case FormulaKind::Imp: return 1;
    case FormulaKind::Or: return 2;
    case FormulaKind::And: return 3;
    case FormulaKind::Not: return 4;
    default: return 5;
  }
}

void print(const Formula& f, int ctx, std::string& out) {
  const bool paren = level(f) < ctx;
  if (paren) out += '(';
  auto args = [&](const std::vector<Term>& ts) {
    if (ts.empty()) return;
    out += '(';
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i) out += ", ";
      out += to_string(ts[i]);
    }
    out += ')';
  };
  switch (f.kind) {
    case FormulaKind::PredI:
    case FormulaKind::PredO:
      out += f.symbol;
      args(f.args);
      break;
    case FormulaKind::Eq:
      out += to_string(f.args[0]) + " = " + to_string(f.args[1]);
      break;
    case FormulaKind::Not:
      out += '~';
      print(f.subs[0], 4, out);
      break;
    case FormulaKind::Or:
      print(f.subs[0], 2, out);
      out += " \\/ ";
      print(f.subs[1], 3, out);
      break;
    case FormulaKind::And:
      print(f.subs[0], 3, out);
      out += " /\\ ";
      print(f.subs[1], 4, out);
      break;
    case FormulaKind::Imp:
      print(f.subs[0], 2, out);
      out += " -> ";
      print(f.subs[1], 1, out);
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out += f.kind == FormulaKind::Exists ? "ex " : "all ";
      out += f.symbol + ". ";
      print(f.subs[0], 0, out);
      break;
  }
  if (paren) out += ')';
}

Term rename_free(const Term& t, const std::map<std::string, std::string>& env) {
  if (t.is_var()) {
    auto it = env.find(t.name);
    return it == env.end() ? t : Term::var(it->second);
  }
  Term out = Term::app(t.name);
  for (const auto& a : t.args) out.args.push_back(rename_free(a, env));
  return out;
}

Formula alpha_normalize(const Formula& f, std::map<std::string, std::string>& env,
                        std::size_t& counter) {
  Formula out{f.kind, f.symbol, {}, {}};
  for (const auto& a : f.args) out.args.push_back(rename_free(a, env));
  if (f.is_quantifier()) {
    const std::string fresh = "%" + std::to_string(counter++);
    auto saved = env.find(f.symbol) == env.end()
                     ? std::optional<std::string>{}
                     : std::optional<std::string>{env[f.symbol]};
    env[f.symbol] = fresh;
    out.symbol = fresh;
    out.subs.push_back(alpha_normalize(f.subs[0], env, counter));
    if (saved)
      env[f.symbol] = *saved;
    else
      env.erase(f.symbol);
    return out;
  }
  for (const auto& s : f.subs) out.subs.push_back(alpha_normalize(s, env, counter));
  return out;
}

void free_vars_into(const Formula& f, VarSet& out) {
  for (const auto& a : f.args) collect_vars(a, out);
  if (f.is_quantifier()) {
    VarSet inner;
    free_vars_into(f.subs[0], inner);
    inner.erase(f.symbol);
    out.insert(inner.begin(), inner.end());
    return;
  }
  for (const auto& s : f.subs) free_vars_into(s, out);
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

std::string alpha_key(const Formula& f) {
  std::map<std::string, std::string> env;
  std::size_t counter = 0;
  return to_string(alpha_normalize(f, env, counter));
}

bool alpha_eq(const Formula& a, const Formula& b) { return alpha_key(a) == alpha_key(b); }

bool operator==(const Formula& a, const Formula& b) { return alpha_eq(a, b); }

VarSet free_vars(const Formula& f) {
  VarSet out;
  free_vars_into(f, out);
  return out;
}

Formula apply_subst(const Formula& f, const Substitution& theta) {
  if (theta.empty()) return f;
  Formula out{f.kind, f.symbol, {}, {}};
  if (!f.is_quantifier()) {
    out.args.reserve(f.args.size());
    for (const auto& a : f.args) out.args.push_back(apply_subst(a, theta));
    out.subs.reserve(f.subs.size());
    for (const auto& s : f.subs) out.subs.push_back(apply_subst(s, theta));
    return out;
  }
  // Only bindings for free variables of f matter under the binder.
  const VarSet fv = free_vars(f);
  std::map<std::string, Term> inner;
  VarSet image_vars;
  for (const auto& [x, t] : theta.bindings()) {
    if (fv.count(x) == 0) continue;
    inner.emplace(x, t);
    collect_vars(t, image_vars);
  }
  if (inner.empty()) return f;
  if (image_vars.count(f.symbol) != 0) {
    VarSet avoid = free_vars(f.subs[0]);
    avoid.insert(image_vars.begin(), image_vars.end());
    for (const auto& [x, t] : inner) avoid.insert(x);
    out.symbol = primed_fresh(f.symbol, avoid);
    inner.emplace(f.symbol, Term::var(out.symbol));
  }
  out.subs.push_back(apply_subst(f.subs[0], Substitution(std::move(inner))));
  return out;
}

Formula instantiate(const Formula& quantified, const Term& t) {
  return apply_subst(quantified.subs.at(0), Substitution::single(quantified.symbol, t));
}

// ---------------------------------------------------------------------------
// Substitutions

Substitution::Substitution(std::map<std::string, Term> bindings) : bindings_(std::move(bindings)) {
  for (auto it = bindings_.begin(); it != bindings_.end();) {
    if (it->second.is_var() && it->second.name == it->first)
      it = bindings_.erase(it);
    else
      ++it;
  }
}

Substitution Substitution::single(std::string var, Term image) {
  std::map<std::string, Term> m;
  m.emplace(std::move(var), std::move(image));
  return Substitution(std::move(m));
}

Term Substitution::operator()(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? Term::var(var) : it->second;
}

VarSet Substitution::domain() const {
  VarSet out;
  for (const auto& [x, t] : bindings_) out.insert(x);
  return out;
}

std::set<Term> Substitution::image() const {
  std::set<Term> out;
  for (const auto& [x, t] : bindings_) out.insert(t);
  return out;
}

bool Substitution::is_atomic() const {
  return std::all_of(bindings_.begin(), bindings_.end(),
                     [](const auto& b) { return b.second.is_atomic(); });
}

SubstKind classify(const Substitution& theta) {
  return theta.is_atomic() ? SubstKind::Atomic : SubstKind::Composite;
}

Substitution compose(const Substitution& first, const Substitution& second) {
  std::map<std::string, Term> out;
  for (const auto& [x, t] : first.bindings()) out.emplace(x, apply_subst(t, second));
  for (const auto& [x, t] : second.bindings())
    if (!first.binds(x)) out.emplace(x, t);
  return Substitution(std::move(out));
}

Substitution override(const Substitution& theta,
                      const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, Term> out = theta.bindings();
  VarSet seen;
  for (const auto& [x, y] : pairs) {
    if (!seen.insert(x).second)
      throw Error(ErrorCode::DuplicateOverride, "variable " + x + " overridden twice");
    out.insert_or_assign(x, Term::var(y));
  }
  return Substitution(std::move(out));
}

std::string to_string(const Substitution& theta) {
  std::string out = "[";
  bool first = true;
  for (const auto& [x, t] : theta.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += x + " := " + to_string(t);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Sequents

namespace {

void canonicalize(std::vector<Formula>& fs, std::vector<std::string>& keys) {
  std::vector<std::pair<std::string, std::size_t>> order;
  order.reserve(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) order.emplace_back(alpha_key(fs[i]), i);
  std::sort(order.begin(), order.end());
  std::vector<Formula> sorted;
  keys.clear();
  for (const auto& [k, i] : order) {
    if (!keys.empty() && keys.back() == k) continue;
    keys.push_back(k);
    sorted.push_back(std::move(fs[i]));
  }
  fs = std::move(sorted);
}

std::size_t find_key(const std::vector<std::string>& keys, const std::string& k) {
  auto it = std::lower_bound(keys.begin(), keys.end(), k);
  return it != keys.end() && *it == k ? static_cast<std::size_t>(it - keys.begin())
                                      : Sequent::npos;
}

}  // namespace

Sequent::Sequent(std::vector<Formula> antecedent, std::vector<Formula> succedent)
    : ante_(std::move(antecedent)), succ_(std::move(succedent)) {
  canonicalize(ante_, ante_keys_);
  canonicalize(succ_, succ_keys_);
  key_.clear();
  for (const auto& k : ante_keys_) key_ += k + '\x1f';
  key_ += "|-";
  for (const auto& k : succ_keys_) key_ += '\x1f' + k;
}

std::size_t Sequent::find_antecedent(const Formula& f) const {
  return find_key(ante_keys_, alpha_key(f));
}

std::size_t Sequent::find_succedent(const Formula& f) const {
  return find_key(succ_keys_, alpha_key(f));
}

std::vector<std::size_t> Sequent::inductive_slots() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ante_.size(); ++i)
    if (ante_[i].is_inductive_atom()) out.push_back(i);
  return out;
}

std::size_t Sequent::slot_of(const Formula& atom) const {
  if (!atom.is_inductive_atom()) return npos;
  const std::size_t pos = find_antecedent(atom);
  if (pos == npos) return npos;
  std::size_t slot = 0;
  for (std::size_t i = 0; i < pos; ++i)
    if (ante_[i].is_inductive_atom()) ++slot;
  return slot;
}

bool alpha_eq(const Sequent& a, const Sequent& b) { return a == b; }

VarSet free_vars(const Sequent& s) {
  VarSet out;
  for (const auto& f : s.antecedent()) free_vars_into(f, out);
  for (const auto& f : s.succedent()) free_vars_into(f, out);
  return out;
}

Sequent apply_subst(const Sequent& s, const Substitution& theta) {
  if (theta.empty()) return s;
  std::vector<Formula> ante, succ;
  ante.reserve(s.antecedent().size());
  succ.reserve(s.succedent().size());
  for (const auto& f : s.antecedent()) ante.push_back(apply_subst(f, theta));
  for (const auto& f : s.succedent()) succ.push_back(apply_subst(f, theta));
  return Sequent(std::move(ante), std::move(succ));
}

std::string to_string(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.antecedent().size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.antecedent()[i]);
  }
  out += s.antecedent().empty() ? "|-" : " |-";
  for (std::size_t i = 0; i < s.succedent().size(); ++i) {
    out += i ? ", " : " ";
    out += to_string(s.succedent()[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fresh names

std::string primed_fresh(std::string_view base, const VarSet& avoid) {
  std::string stem(base);
  while (!stem.empty() && stem.back() == '\'') stem.pop_back();
  for (std::size_t k = 1;; ++k) {
    std::string candidate = stem + std::string(k, '\'');
    if (avoid.count(candidate) == 0) return candidate;
  }
}

std::string FreshNames::next() {
  static constexpr const char* stems[] = {"y", "z", "w"};
  for (std::size_t round = 0;; ++round) {
    for (const char* stem : stems) {
      std::string candidate = round == 0 ? stem : stem + std::to_string(round);
      if (used_.insert(candidate).second) return candidate;
    }
  }
}

// ---------------------------------------------------------------------------
// Definition sets

namespace {

void push_unique(std::vector<std::string>& params, const Term& t) {
  if (t.is_var()) {
    if (std::find(params.begin(), params.end(), t.name) == params.end()) params.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) push_unique(params, a);
}

}  // namespace

void DefinitionSet::add(Production p) {
  auto it = signature_.predicates.find(p.predicate);
  if (it == signature_.predicates.end() || !it->second.inductive)
    throw Error(ErrorCode::InvalidInput, "production for non-inductive predicate " + p.predicate);
  if (it->second.arity != p.head_args.size())
    throw Error(ErrorCode::InvalidInput, "production head arity mismatch for " + p.predicate);
  p.params.clear();
  for (const auto& t : p.head_args) push_unique(p.params, t);
  for (const auto& b : p.body) {
    if (b.kind != FormulaKind::PredI && b.kind != FormulaKind::PredO)
      throw Error(ErrorCode::InvalidInput, "production body must contain predicate atoms only");
    auto bit = signature_.predicates.find(b.symbol);
    if (bit == signature_.predicates.end() || bit->second.arity != b.args.size())
      throw Error(ErrorCode::InvalidInput, "bad body atom " + to_string(b));
    for (const auto& t : b.args) push_unique(p.params, t);
  }
  productions_.push_back(std::move(p));
}

std::vector<const Production*> DefinitionSet::productions_of(const std::string& pred) const {
  std::vector<const Production*> out;
  for (const auto& p : productions_)
    if (p.predicate == pred) out.push_back(&p);
  return out;
}

}  // namespace cyclop
