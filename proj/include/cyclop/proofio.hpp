#pragma once

// Line-oriented text format for definition sets and cyclic pre-proofs.
// The grammar is documented in FORMAT.md.

#include <optional>
#include <string>
#include <string_view>

#include "cyclop/proofgraph.hpp"
#include "cyclop/syntax.hpp"

namespace cyclop {

struct ProofFile {
  DefinitionSet defs;
  PreProof proof;
  /// Rule-set preset named by a `rules` statement, if any.
  std::optional<std::string> rules;
};

/// Throws ParseError with code SyntaxError, ArityError or UnresolvedReference.
ProofFile parse_proof_file(std::string_view text);

/// Canonical text: declarations, productions, the rules statement, nodes in
/// depth-first preorder from the root, then bud links. Throws InvalidInput
/// on an empty proof.
std::string print_proof_file(const ProofFile& file);

// Fragments, parsed against a signature. Errors are ParseErrors located
// within `text` (line 1).
Term parse_term(const Signature& sig, std::string_view text);
Formula parse_formula(const Signature& sig, std::string_view text);
Sequent parse_sequent(const Signature& sig, std::string_view text);
/// "[x := t, y := u]"
Substitution parse_substitution(const Signature& sig, std::string_view text);

}  // namespace cyclop
