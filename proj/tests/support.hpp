#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cyclop/proofio.hpp"

namespace cyclop::test {

inline std::string read_corpus(const std::string& name) {
  std::ifstream in(std::string(CYCLOP_CORPUS_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ProofFile load(const std::string& name) { return parse_proof_file(read_corpus(name)); }

inline RuleSet rules_of(const ProofFile& f) {
  return f.rules ? *RuleSet::preset(*f.rules) : RuleSet::full();
}

}  // namespace cyclop::test
