#include "doctest.h"

#include <random>

#include "cyclop/error.hpp"
#include "cyclop/proofio.hpp"
#include "cyclop/syntax.hpp"

using namespace cyclop;

namespace {

Signature sig() {
  Signature s;
  s.functions = {{"0", 0}, {"s", 1}, {"f", 2}};
  s.predicates = {{"N", {1, true}}, {"E", {1, true}}, {"O", {1, true}}, {"P", {2, false}},
                  {"Q", {1, false}}};
  return s;
}

Formula fm(const char* text) { return parse_formula(sig(), text); }
Sequent sq(const char* text) { return parse_sequent(sig(), text); }
Substitution sb(const char* text) { return parse_substitution(sig(), text); }
Term term_of(const char* text) { return parse_term(sig(), text); }

// Random formulas over a tiny vocabulary so that binders and free variables
// collide often.
struct Gen {
  std::mt19937 rng;
  const std::vector<std::string> vars{"x", "y", "z"};

  std::string pick() { return vars[rng() % vars.size()]; }

  Term term(int depth) {
    switch (depth <= 0 ? rng() % 2 : rng() % 4) {
      case 0: return Term::var(pick());
      case 1: return Term::app("0");
      case 2: return Term::app("s", {term(depth - 1)});
      default: return Term::app("f", {term(depth - 1), term(depth - 1)});
    }
  }

  Formula formula(int depth) {
    switch (depth <= 0 ? rng() % 3 : rng() % 8) {
      case 0: return Formula::inductive("N", {term(1)});
      case 1: return Formula::ordinary("P", {term(1), term(1)});
      case 2: return Formula::equal(term(1), term(1));
      case 3: return Formula::negation(formula(depth - 1));
      case 4: return Formula::conjunction(formula(depth - 1), formula(depth - 1));
      case 5: return Formula::implication(formula(depth - 1), formula(depth - 1));
      case 6: return Formula::exists(pick(), formula(depth - 1));
      default: return Formula::forall(pick(), formula(depth - 1));
    }
  }

  Substitution subst(bool atomic) {
    std::map<std::string, Term> m;
    for (const auto& v : vars)
      if (rng() % 2) m.emplace(v, atomic ? (rng() % 3 ? Term::var(pick()) : Term::app("0")) : term(1));
    return Substitution(std::move(m));
  }
};

}  // namespace

TEST_CASE("free variables") {
  CHECK(free_vars(fm("all x. P(x, y)")) == VarSet{"y"});
  CHECK(free_vars(sq("N(x) |- E(x) \\/ O(x)")) == VarSet{"x"});
  CHECK(free_vars(term_of("0")).empty());
  CHECK(free_vars(fm("ex y. y = x /\\ Q(y)")) == VarSet{"x"});
}

TEST_CASE("substitution application") {
  CHECK(to_string(apply_subst(fm("N(x)"), sb("[x := s(y)]"))) == "N(s(y))");
  const Formula captured = apply_subst(fm("ex y. y = x"), sb("[x := y]"));
  CHECK(alpha_eq(captured, fm("ex w. w = y")));
  CHECK(free_vars(captured) == VarSet{"y"});
  CHECK(apply_subst(sq("N(y) |- O(y), E(y)"), sb("[y := x]")) == sq("N(x) |- O(x), E(x)"));
}

TEST_CASE("composition") {
  CHECK(compose(sb("[y := x]"), sb("[x := z]")) == sb("[y := z, x := z]"));
  CHECK(compose(sb("[y := x]"), sb("[y := x]")) == sb("[y := x]"));
  const Substitution t = sb("[x := s(y), z := 0]");
  CHECK(compose(t, {}) == t);
  CHECK(compose({}, t) == t);
  // The swap composed with itself is the identity, which normalizes away.
  CHECK(compose(sb("[x := y, y := x]"), sb("[x := y, y := x]")).empty());
}

TEST_CASE("override") {
  CHECK(override(sb("[y := x]"), {{"x", "y"}}) == sb("[y := x, x := y]"));
  CHECK(override({}, {{"x", "y"}}) == sb("[x := y]"));
  CHECK(override(sb("[y := x]"), {{"y", "y"}}).empty());
  try {
    override({}, {{"x", "y"}, {"x", "z"}});
    FAIL("expected DuplicateOverride");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateOverride);
  }
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(fm("all x. Q(x)"), fm("all y. Q(y)")));
  CHECK_FALSE(alpha_eq(fm("Q(x)"), fm("Q(y)")));
  CHECK(alpha_eq(sq("N(x) |- E(x), O(x)"), sq("N(x) |- O(x), E(x)")));
  CHECK_FALSE(alpha_eq(fm("all x. P(x, y)"), fm("all y. P(y, y)")));
  // Sets: duplicates up to renaming collapse.
  CHECK(sq("all x. Q(x), all y. Q(y) |- ").antecedent().size() == 1);
}

TEST_CASE("classification") {
  CHECK(classify(sb("[x := y, z := 0]")) == SubstKind::Atomic);
  CHECK(classify(sb("[x := f(x, y)]")) == SubstKind::Composite);
  CHECK(classify({}) == SubstKind::Atomic);
}

TEST_CASE("fresh names") {
  CHECK(primed_fresh("y", {"y", "y'"}) == "y''");
  CHECK(primed_fresh("h'", {}) == "h'");
  FreshNames names({"y", "w"});
  CHECK(names.next() == "z");
  CHECK(names.next() == "y1");
}

TEST_CASE("randomized laws") {
  Gen g{std::mt19937(20261016)};
  for (int i = 0; i < 400; ++i) {
    const Formula phi = g.formula(3);
    const bool atomic = i % 2 == 0;
    const Substitution t1 = g.subst(atomic);
    const Substitution t2 = g.subst(atomic);

    // Composition law against sequential application.
    CHECK(alpha_eq(apply_subst(phi, compose(t1, t2)), apply_subst(apply_subst(phi, t1), t2)));

    // Capture freedom: free variables are exactly those of the images.
    VarSet expect;
    for (const auto& v : free_vars(phi)) {
      const VarSet fv = free_vars(t1(v));
      expect.insert(fv.begin(), fv.end());
    }
    CHECK(free_vars(apply_subst(phi, t1)) == expect);

    if (atomic) CHECK(classify(compose(t1, t2)) == SubstKind::Atomic);

    // Renaming onto unused names and back is the identity up to alpha.
    const Substitution there = sb("[x := u, y := v, z := w]");
    const Substitution back = sb("[u := x, v := y, w := z]");
    CHECK(alpha_eq(apply_subst(apply_subst(phi, there), back), phi));
  }
}
