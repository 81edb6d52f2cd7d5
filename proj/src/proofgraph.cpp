#include "cyclop/proofgraph.hpp"

#include <algorithm>
#include <stdexcept>

#include "cyclop/error.hpp"

namespace cyclop {

NodeId PreProof::add(ProofNode node) {
  nodes.push_back(std::move(node));
  return nodes.size() - 1;
}

std::optional<NodeId> PreProof::find(std::string_view name) const {
  for (NodeId i = 0; i < nodes.size(); ++i)
    if (nodes[i].name == name) return i;
  return std::nullopt;
}

RuleInstance PreProof::instance(NodeId id) const {
  const ProofNode& n = nodes.at(id);
  RuleInstance inst{n.rule, n.sequent, {}, n.ann};
  inst.premises.reserve(n.premises.size());
  for (NodeId p : n.premises) inst.premises.push_back(nodes.at(p).sequent);
  return inst;
}

std::vector<NodeId> parent_table(const PreProof& pre) {
  std::vector<NodeId> parent(pre.nodes.size(), kNoNode);
  for (NodeId i = 0; i < pre.nodes.size(); ++i)
    for (NodeId p : pre.nodes[i].premises) parent.at(p) = i;
  return parent;
}

std::set<RuleId> rules_used(const PreProof& pre) {
  std::set<RuleId> out;
  for (const auto& n : pre.nodes)
    if (n.kind == ProofNode::Kind::Rule) out.insert(n.rule);
  return out;
}

std::set<Substitution> substitutions_of(const PreProof& pre) {
  std::set<Substitution> out;
  for (const auto& n : pre.nodes)
    if (n.kind == ProofNode::Kind::Rule && n.rule == RuleId::Subst) out.insert(n.ann.subst);
  return out;
}

VarSet free_vars(const PreProof& pre) {
  VarSet out;
  for (const auto& n : pre.nodes) {
    const VarSet fv = free_vars(n.sequent);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

std::size_t count_rule(const PreProof& pre, RuleId rule) {
  return static_cast<std::size_t>(std::count_if(pre.nodes.begin(), pre.nodes.end(), [&](const ProofNode& n) {
    return n.kind == ProofNode::Kind::Rule && n.rule == rule;
  }));
}

std::size_t EdgeTable::find(NodeId from, NodeId to) const {
  if (from >= out.size()) return npos;
  for (std::size_t e : out[from])
    if (edges[e].to == to) return e;
  return npos;
}

namespace {

[[noreturn]] void shape_error(const std::string& what) {
  throw Error(ErrorCode::InvalidInput, what);
}

void check_tree_shape(const PreProof& pre) {
  const std::size_t n = pre.nodes.size();
  if (n == 0) shape_error("empty proof");
  if (pre.root >= n) shape_error("root out of range");
  std::vector<NodeId> parent(n, kNoNode);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId p : pre.nodes[i].premises) {
      if (p >= n) shape_error("node " + pre.nodes[i].name + " references a missing premise");
      if (p == pre.root) shape_error("the root cannot be a premise");
      if (parent[p] != kNoNode) shape_error("node " + pre.nodes[p].name + " has two parents");
      parent[p] = i;
    }
  }
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{pre.root};
  seen[pre.root] = true;
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    for (NodeId p : pre.nodes[id].premises) {
      seen[p] = true;
      stack.push_back(p);
    }
  }
  for (NodeId i = 0; i < n; ++i)
    if (!seen[i]) shape_error("node " + pre.nodes[i].name + " is unreachable from the root");
}

void check_companions(const PreProof& pre) {
  for (const auto& [bud, comp] : pre.companions) {
    if (bud >= pre.nodes.size() || pre.nodes[bud].kind != ProofNode::Kind::Bud)
      throw Error(ErrorCode::DanglingCompanion, "companion entry for a non-bud node");
    if (comp >= pre.nodes.size() || pre.nodes[comp].kind != ProofNode::Kind::Rule ||
        pre.nodes[comp].premises.empty())
      throw Error(ErrorCode::DanglingCompanion,
                  "bud " + pre.nodes[bud].name + " has no internal companion");
  }
  for (NodeId i = 0; i < pre.nodes.size(); ++i) {
    const ProofNode& n = pre.nodes[i];
    if (n.kind != ProofNode::Kind::Bud) continue;
    if (!n.premises.empty()) shape_error("bud " + n.name + " has premises");
    auto it = pre.companions.find(i);
    if (it == pre.companions.end())
      throw Error(ErrorCode::DanglingCompanion, "bud " + n.name + " has no companion");
    const ProofNode& c = pre.nodes[it->second];
    if (c.sequent != n.sequent)
      throw Error(ErrorCode::BudMismatch, "bud " + n.name + " (" + to_string(n.sequent) +
                                              ") differs from companion " + c.name + " (" +
                                              to_string(c.sequent) + ")");
  }
}

}  // namespace

EdgeTable validate(const PreProof& pre, const DefinitionSet& defs, const RuleSet& rules,
                   ValidateOptions opts) {
  check_tree_shape(pre);
  check_companions(pre);

  EdgeTable table;
  const std::size_t n = pre.nodes.size();
  table.out.resize(n);
  table.slots.resize(n);
  for (NodeId i = 0; i < n; ++i) table.slots[i] = slot_count(pre.nodes[i].sequent);

  for (NodeId i = 0; i < n; ++i) {
    const ProofNode& node = pre.nodes[i];
    switch (node.kind) {
      case ProofNode::Kind::Open:
        if (!opts.allow_open)
          throw Error(ErrorCode::InvalidRule, "node " + node.name + ": open leaf");
        if (!node.premises.empty()) shape_error("open node " + node.name + " has premises");
        break;
      case ProofNode::Kind::Bud: {
        Edge e{i, pre.companions.at(i), 0, true, {}};
        for (std::size_t s = 0; s < table.slots[i]; ++s) e.pairs.push_back({s, s, false});
        table.out[i].push_back(table.edges.size());
        table.edges.push_back(std::move(e));
        break;
      }
      case ProofNode::Kind::Rule: {
        OccurrenceMap occ;
        try {
          occ = check_rule_instance(pre.instance(i), defs, rules);
        } catch (const Error& err) {
          throw Error(ErrorCode::InvalidRule, "node " + node.name + ": " + err.what());
        }
        for (std::size_t k = 0; k < node.premises.size(); ++k) {
          table.out[i].push_back(table.edges.size());
          table.edges.push_back(Edge{i, node.premises[k], k, false, std::move(occ.pairs[k])});
        }
        break;
      }
    }
  }
  return table;
}

std::vector<NodeId> tree_path(const PreProof& pre, NodeId from, NodeId to) {
  const auto parent = parent_table(pre);
  std::vector<NodeId> path{to};
  while (path.back() != from) {
    const NodeId up = parent.at(path.back());
    if (up == kNoNode) return {};
    path.push_back(up);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool is_path(const EdgeTable& edges, const std::vector<NodeId>& path) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (edges.find(path[i], path[i + 1]) == EdgeTable::npos) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Tree unfolding

UnfoldedProof::UnfoldedProof(const PreProof& source) : source_(&source) {}

NodeId UnfoldedProof::resolve(NodeId id) const {
  const auto& pre = *source_;
  if (pre.nodes.at(id).kind != ProofNode::Kind::Bud) return id;
  return pre.companions.at(id);
}

NodeId UnfoldedProof::fmap(const Address& a) const {
  NodeId cur = resolve(source_->root);
  for (std::uint32_t k : a) cur = resolve(source_->nodes[cur].premises.at(k));
  return cur;
}

Materialized materialize(const UnfoldedProof& u, std::size_t depth) {
  const PreProof& src = u.source();
  Materialized m;
  struct Item {
    NodeId out;
    NodeId source;
    std::size_t depth;
  };
  auto emit = [&](NodeId source, std::size_t d) {
    const ProofNode& s = src.nodes[source];
    ProofNode n;
    n.name = "m" + std::to_string(m.tree.nodes.size());
    n.sequent = s.sequent;
    const bool frontier = d == depth && !s.premises.empty();
    n.kind = frontier || s.kind == ProofNode::Kind::Open ? ProofNode::Kind::Open
                                                         : ProofNode::Kind::Rule;
    n.rule = s.rule;
    n.ann = s.ann;
    m.fmap.push_back(source);
    m.depth.push_back(d);
    return m.tree.add(std::move(n));
  };
  const NodeId root_src = u.resolve(src.root);
  m.tree.root = emit(root_src, 0);
  std::vector<Item> stack{{m.tree.root, root_src, 0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    if (m.tree.nodes[it.out].kind != ProofNode::Kind::Rule) continue;
    const auto& prems = src.nodes[it.source].premises;
    std::vector<Item> children;
    for (NodeId p : prems) {
      const NodeId ps = u.resolve(p);
      const NodeId id = emit(ps, it.depth + 1);
      m.tree.nodes[it.out].premises.push_back(id);
      children.push_back({id, ps, it.depth + 1});
    }
    stack.insert(stack.end(), children.rbegin(), children.rend());
  }
  return m;
}

}  // namespace cyclop
