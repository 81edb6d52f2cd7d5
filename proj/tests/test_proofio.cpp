#include "doctest.h"

#include "cyclop/error.hpp"
#include "cyclop/proofio.hpp"
#include "support.hpp"

using namespace cyclop;

namespace {

ErrorCode parse_code(std::string_view text) {
  try {
    parse_proof_file(text);
  } catch (const ParseError& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("neo parses to nine nodes with one bud") {
  const ProofFile f = test::load("neo.cpf");
  CHECK(f.proof.nodes.size() == 9);
  CHECK(f.proof.companions.size() == 1);
  CHECK(f.proof.nodes[f.proof.root].name == "n0");
  CHECK(to_string(f.proof.nodes[0].sequent) == "N(x) |- E(x) \\/ O(x)");
  CHECK(f.defs.productions().size() == 5);
  CHECK_FALSE(f.rules.has_value());
}

TEST_CASE("printing is a fixpoint after one round trip") {
  for (const char* name : {"neo.cpf", "bad-loop.cpf", "p-ulprime.cpf", "p-cutfree.cpf",
                           "composite.cpf", "composite-cycle.cpf"}) {
    CAPTURE(name);
    const ProofFile f = test::load(name);
    const std::string once = print_proof_file(f);
    const ProofFile g = parse_proof_file(once);
    CHECK(print_proof_file(g) == once);
    REQUIRE(g.proof.nodes.size() == f.proof.nodes.size());
    for (NodeId i = 0; i < f.proof.nodes.size(); ++i) {
      const auto j = g.proof.find(f.proof.nodes[i].name);
      REQUIRE(j.has_value());
      CHECK(alpha_eq(g.proof.nodes[*j].sequent, f.proof.nodes[i].sequent));
    }
    CHECK(g.rules == f.rules);
  }
}

TEST_CASE("undeclared predicates are arity errors") {
  CHECK(parse_code("pred N/1 ind;\nnode a \"M(x) |-\" open;\n") == ErrorCode::ArityError);
  CHECK(parse_code("sig s/1;\npred N/1 ind;\nnode a \"N(s(x, x)) |-\" open;\n") ==
        ErrorCode::ArityError);
  CHECK(parse_code("pred N/1 ind;\nnode a \"N |-\" open;\n") == ErrorCode::ArityError);
}

TEST_CASE("unknown node names are unresolved references") {
  CHECK(parse_code("pred N/1 ind;\nnode a \"N(x) |-\" rule Wk from b;\n") ==
        ErrorCode::UnresolvedReference);
  CHECK(parse_code("pred N/1 ind;\nnode a \"N(x) |-\" bud;\nbud a -> q;\n") ==
        ErrorCode::UnresolvedReference);
}

TEST_CASE("syntax errors carry a location") {
  try {
    parse_proof_file("pred N/1 ind;\nnode a \"N(x) |- ->\" open;\n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
    CHECK(e.line() == 2);
    CHECK(e.column() == 17);
  }
  CHECK(parse_code("") == ErrorCode::SyntaxError);
  CHECK(parse_code("node a \"|-\" open") == ErrorCode::SyntaxError);
  CHECK(parse_code("node a \"|-\" rule Frobnicate;") == ErrorCode::SyntaxError);
  CHECK(parse_code("node a \"|-\" open;\nnode a \"|-\" open;") == ErrorCode::SyntaxError);
  CHECK(parse_code("node a \"|- x = y\" rule Wk\n") == ErrorCode::SyntaxError);
  CHECK(parse_code("node a \"|-\" open; \x01") == ErrorCode::SyntaxError);
}

TEST_CASE("deep nesting is rejected, not recursed into") {
  std::string f(5000, '~');
  f += "x = x";
  CHECK(parse_code("node a \"|- " + f + "\" open;") == ErrorCode::SyntaxError);
  std::string t = "x";
  for (int i = 0; i < 2000; ++i) t = "s(" + t + ")";
  CHECK(parse_code("sig s/1;\nnode a \"|- " + t + " = x\" open;") == ErrorCode::SyntaxError);
}

TEST_CASE("fragment parsers follow the formula grammar") {
  Signature sig;
  sig.functions = {{"s", 1}, {"0", 0}};
  sig.predicates = {{"N", {1, true}}, {"Q", {2, false}}};
  CHECK(to_string(parse_formula(sig, "N(x) -> N(y) -> N(z)")) == "N(x) -> N(y) -> N(z)");
  CHECK(parse_formula(sig, "(N(x) -> N(y)) -> N(z)").subs[0].kind == FormulaKind::Imp);
  CHECK(parse_formula(sig, "N(x) \\/ N(y) /\\ N(z)").kind == FormulaKind::Or);
  CHECK(parse_formula(sig, "all x. N(x) \\/ N(y)").kind == FormulaKind::Forall);
  CHECK(parse_formula(sig, "Q(x, 0)").kind == FormulaKind::PredO);
  CHECK(parse_term(sig, "s(s(0))") == Term::app("s", {Term::app("s", {Term::app("0")})}));
  CHECK(parse_substitution(sig, "[x := s(y), y := 0]").size() == 2);
  CHECK(parse_substitution(sig, "[x := x]").empty());
  CHECK(parse_sequent(sig, "|-") == Sequent());
  CHECK_THROWS_AS(parse_substitution(sig, "[x := 0, x := y]"), ParseError);
  CHECK_THROWS_AS(parse_formula(sig, "all s. N(s)"), ParseError);
}

TEST_CASE("rules statement selects a preset") {
  const ProofFile f = test::load("p-ulprime.cpf");
  REQUIRE(f.rules.has_value());
  CHECK(*f.rules == "section4");
  CHECK(parse_code("rules nosuch;\nnode a \"|-\" open;") == ErrorCode::SyntaxError);
}

TEST_CASE("printing an empty proof is refused") {
  CHECK_THROWS_AS(print_proof_file(ProofFile{}), Error);
}
