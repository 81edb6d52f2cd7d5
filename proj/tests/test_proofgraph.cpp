#include "doctest.h"

#include "cyclop/error.hpp"
#include "cyclop/proofgraph.hpp"
#include "support.hpp"

using namespace cyclop;

namespace {

ErrorCode validate_code(const ProofFile& f) {
  try {
    validate(f.proof, f.defs, test::rules_of(f));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a validation error");
  return ErrorCode::InvalidInput;
}

std::size_t count_in(const PreProof& p, RuleId r) {
  std::size_t n = 0;
  for (const auto& node : p.nodes)
    if (node.kind == ProofNode::Kind::Rule && node.rule == r) ++n;
  return n;
}

}  // namespace

TEST_CASE("every corpus proof validates") {
  for (const char* name : {"neo.cpf", "bad-loop.cpf", "p-ulprime.cpf", "p-cutfree.cpf",
                           "composite.cpf", "composite-cycle.cpf"}) {
    CAPTURE(name);
    const ProofFile f = test::load(name);
    CHECK_NOTHROW(validate(f.proof, f.defs, test::rules_of(f)));
  }
}

TEST_CASE("neo edge table") {
  const ProofFile f = test::load("neo.cpf");
  const EdgeTable t = validate(f.proof, f.defs, RuleSet::full());
  CHECK(t.edges.size() == 9);  // eight tree edges and one back edge
  const NodeId n1 = *f.proof.find("n1");
  const NodeId n4 = *f.proof.find("n4");
  const Edge& ul = t.edges[t.find(n1, n4)];
  REQUIRE(ul.pairs.size() == 1);
  CHECK(ul.pairs[0].progress);
  const Edge& back = t.edges[t.find(*f.proof.find("n8"), n1)];
  CHECK(back.back);
  CHECK(back.pairs == std::vector<TracePair>{{0, 0, false}});
}

TEST_CASE("validation is idempotent") {
  const ProofFile f = test::load("neo.cpf");
  const EdgeTable a = validate(f.proof, f.defs, RuleSet::full());
  const EdgeTable b = validate(f.proof, f.defs, RuleSet::full());
  REQUIRE(a.edges.size() == b.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) CHECK(a.edges[i].pairs == b.edges[i].pairs);
}

TEST_CASE("a bud must match its companion") {
  ProofFile f = test::load("neo.cpf");
  const NodeId bud = *f.proof.find("n8");
  f.proof.nodes[bud].sequent = parse_sequent(f.defs.signature(), "N(y) |- O(y), E(z)");
  CHECK(validate_code(f) == ErrorCode::BudMismatch);
}

TEST_CASE("dangling companions and disabled rules") {
  ProofFile f = test::load("neo.cpf");
  f.proof.companions.clear();
  CHECK(validate_code(f) == ErrorCode::DanglingCompanion);

  ProofFile g = test::load("p-ulprime.cpf");
  g.rules = "full";  // ULPrime is not part of the full set
  CHECK(validate_code(g) == ErrorCode::InvalidRule);
}

TEST_CASE("single reflexivity leaf") {
  ProofFile f = parse_proof_file("sig 0/0;\nnode a \"|- 0 = 0\" rule EqR;\n");
  const EdgeTable t = validate(f.proof, f.defs, RuleSet::full());
  CHECK(t.edges.empty());
  CHECK(f.proof.companions.empty());
}

TEST_CASE("open leaves need permission") {
  ProofFile f = parse_proof_file("pred N/1 ind;\nnode a \"N(x) |-\" open;\n");
  CHECK(validate_code(f) == ErrorCode::InvalidRule);
  CHECK_NOTHROW(validate(f.proof, f.defs, RuleSet::full(), {.allow_open = true}));
}

TEST_CASE("materializing the neo unfolding") {
  const ProofFile f = test::load("neo.cpf");
  const UnfoldedProof u(f.proof);

  const Materialized m0 = materialize(u, 0);
  CHECK(m0.tree.nodes.size() == 1);
  CHECK(m0.tree.nodes[0].kind == ProofNode::Kind::Open);

  // The Subst sits five steps below the UL it loops back to: depths 5, 10, ...
  CHECK(count_in(materialize(u, 4).tree, RuleId::Subst) == 0);
  CHECK(count_in(materialize(u, 5).tree, RuleId::Subst) == 0);  // frontier nodes are open
  CHECK(count_in(materialize(u, 6).tree, RuleId::Subst) == 1);

  const Materialized m = materialize(u, 10);
  for (NodeId i = 0; i < m.tree.nodes.size(); ++i) {
    CHECK(m.tree.nodes[i].sequent == f.proof.nodes[m.fmap[i]].sequent);
    CHECK(f.proof.nodes[m.fmap[i]].kind != ProofNode::Kind::Bud);
  }
  CHECK_NOTHROW(validate(m.tree, f.defs, RuleSet::full(), {.allow_open = true}));
}

TEST_CASE("a cycle-free proof materializes to itself") {
  const ProofFile f = test::load("composite.cpf");
  const Materialized m = materialize(UnfoldedProof(f.proof), 50);
  REQUIRE(m.tree.nodes.size() == f.proof.nodes.size());
  for (NodeId i = 0; i < m.tree.nodes.size(); ++i) {
    CHECK(m.tree.nodes[i].kind == ProofNode::Kind::Rule);
    CHECK(m.fmap[i] == i);
  }
}

TEST_CASE("unfolding addresses") {
  const ProofFile f = test::load("neo.cpf");
  const UnfoldedProof u(f.proof);
  CHECK(u.fmap({}) == f.proof.root);
  // n0 -> n1 -> n4 -> n5 -> n6 -> n7 -> (n8 = n1)
  CHECK(u.fmap({0, 1, 0, 0, 0, 0}) == *f.proof.find("n1"));
  CHECK_THROWS_AS(u.fmap({0, 0, 0, 0}), std::out_of_range);
}
