#pragma once

// Cyclic pre-proofs: a finite derivation tree plus a bud-to-companion map,
// their validation into a trace edge table, and the lazy tree unfolding.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cyclop/calculus.hpp"
#include "cyclop/syntax.hpp"

namespace cyclop {

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct ProofNode {
  /// Open leaves only occur in partially materialized trees.
  enum class Kind : std::uint8_t { Rule, Bud, Open };

  std::string name;
  Sequent sequent;
  Kind kind = Kind::Rule;
  RuleId rule = RuleId::Axiom;
  Annotation ann;
  std::vector<NodeId> premises;
};

struct PreProof {
  std::vector<ProofNode> nodes;
  NodeId root = 0;
  /// bud -> companion
  std::map<NodeId, NodeId> companions;

  NodeId add(ProofNode node);
  std::optional<NodeId> find(std::string_view name) const;
  /// The rule instance at a Rule node, premises taken from its children.
  RuleInstance instance(NodeId id) const;
  bool is_leaf(NodeId id) const { return nodes[id].premises.empty(); }
};

/// Parent of every node; kNoNode for the root. Assumes a tree.
std::vector<NodeId> parent_table(const PreProof& pre);
/// Rules applied at Rule nodes.
std::set<RuleId> rules_used(const PreProof& pre);
/// Substitutions carried by Subst nodes, as a set.
std::set<Substitution> substitutions_of(const PreProof& pre);
/// Free variables of every sequent in the proof.
VarSet free_vars(const PreProof& pre);
std::size_t count_rule(const PreProof& pre, RuleId rule);

/// One edge of the path graph: a tree edge to a premise, or a bud's edge to
/// its companion (identity on slots).
struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  std::size_t premise = 0;
  bool back = false;
  std::vector<TracePair> pairs;
};

struct EdgeTable {
  std::vector<Edge> edges;
  /// Outgoing edge indices per node, tree edges in premise order.
  std::vector<std::vector<std::size_t>> out;
  /// Number of trace slots per node.
  std::vector<std::size_t> slots;

  /// Edge index for from->to, or npos.
  std::size_t find(NodeId from, NodeId to) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct ValidateOptions {
  bool allow_open = false;
};

/// Throws InvalidInput (tree shape), DanglingCompanion, BudMismatch or
/// InvalidRule. Checks run in that order.
EdgeTable validate(const PreProof& pre, const DefinitionSet& defs, const RuleSet& rules,
                   ValidateOptions opts = {});

/// Nodes from `from` down to `to` inclusive, following tree edges; empty
/// when `from` is not an ancestor of `to`.
std::vector<NodeId> tree_path(const PreProof& pre, NodeId from, NodeId to);

/// True iff consecutive nodes are joined by an edge of the table.
bool is_path(const EdgeTable& edges, const std::vector<NodeId>& path);

// ---------------------------------------------------------------------------
// Tree unfolding

/// Sequence of premise indices from the root.
using Address = std::vector<std::uint32_t>;

/// Infinite tree obtained by replacing every bud with a copy of its
/// companion's subtree. Nodes are addressed by premise index paths and are
/// exact copies of source nodes, so fmap(a) is the whole story.
class UnfoldedProof {
 public:
  explicit UnfoldedProof(const PreProof& source);

  const PreProof& source() const noexcept { return *source_; }
  /// The source node (never a bud) an address maps to. Throws
  /// std::out_of_range for an address that leaves the tree.
  NodeId fmap(const Address& a) const;
  /// Bud to companion; identity otherwise.
  NodeId resolve(NodeId id) const;

 private:
  const PreProof* source_;
};

struct Materialized {
  /// Tree with Open leaves at the frontier and no buds.
  PreProof tree;
  std::vector<NodeId> fmap;
  std::vector<std::size_t> depth;
};

/// Every node at depth <= `depth`; internal nodes at exactly `depth` become
/// Open leaves.
Materialized materialize(const UnfoldedProof& u, std::size_t depth);

}  // namespace cyclop
