#include "cyclop/eliminator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "cyclop/error.hpp"
#include "cyclop/psc.hpp"

namespace cyclop {

namespace {

bool is_subst(const ProofNode& n) {
  return n.kind == ProofNode::Kind::Rule && n.rule == RuleId::Subst;
}

Sequent with_left(const Sequent& s, const Formula& f) {
  auto ante = s.antecedent();
  ante.push_back(f);
  return Sequent(std::move(ante), s.succedent());
}

Sequent with_right(const Sequent& s, const Formula& f) {
  auto succ = s.succedent();
  succ.push_back(f);
  return Sequent(s.antecedent(), std::move(succ));
}

std::vector<Formula> drop(const std::vector<Formula>& fs, const Formula& f) {
  std::vector<Formula> out;
  for (const auto& g : fs)
    if (!alpha_eq(g, f)) out.push_back(g);
  return out;
}

class NodeNamer {
 public:
  explicit NodeNamer(const PreProof& p) {
    for (const auto& n : p.nodes) used_.insert(n.name);
  }
  std::string make(const std::string& base) {
    std::string n = base;
    for (std::size_t k = 2; !used_.insert(n).second; ++k) n = base + "_" + std::to_string(k);
    return n;
  }

 private:
  std::set<std::string> used_;
};

bool has_all(const RuleSet& rules, std::initializer_list<RuleId> need) {
  return std::all_of(need.begin(), need.end(), [&](RuleId r) { return rules.contains(r); });
}

// Replaces the composite Subst at `id` by the gadget. `id` keeps its name and
// sequent and becomes the gadget's bottom node; the old premise ends up
// above the gadget's atomic Subst.
void rewrite_composite(PreProof& out, NodeId id, bool use_freshl, FreshNames& names,
                       NodeNamer& namer) {
  const std::string base = out.nodes[id].name;
  const Sequent concl = out.nodes[id].sequent;
  const Substitution theta = out.nodes[id].ann.subst;
  const NodeId above = out.nodes[id].premises.at(0);
  const Sequent prem = out.nodes[above].sequent;

  std::vector<std::string> xs, ys;
  std::vector<Term> ts;
  std::vector<Formula> eqs;
  std::map<std::string, Term> renaming;
  for (const auto& [x, t] : theta.bindings()) {
    xs.push_back(x);
    ts.push_back(t);
    ys.push_back(names.next());
    eqs.push_back(Formula::equal(Term::var(ys.back()), t));
    renaming.emplace(x, Term::var(ys.back()));
  }
  const std::size_t n = xs.size();

  auto make = [&](const std::string& tag, Sequent s) {
    ProofNode node;
    node.name = namer.make(base + "_" + tag);
    node.sequent = std::move(s);
    return out.add(std::move(node));
  };
  auto set = [&](NodeId at, RuleId rule, Annotation ann, std::vector<NodeId> premises) {
    ProofNode& node = out.nodes[at];
    node.kind = ProofNode::Kind::Rule;
    node.rule = rule;
    node.ann = std::move(ann);
    node.premises = std::move(premises);
  };

  NodeId cur = id;
  Sequent s = concl;
  if (use_freshl) {
    for (std::size_t i = 0; i < n; ++i) {
      const Sequent next = with_left(s, eqs[i]);
      const NodeId child = make("fresh" + std::to_string(i + 1), next);
      Annotation a;
      a.eigen = ys[i];
      a.term = ts[i];
      set(cur, RuleId::FreshL, std::move(a), {child});
      cur = child;
      s = next;
    }
  } else {
    std::vector<Formula> exs;
    for (std::size_t i = 0; i < n; ++i) exs.push_back(Formula::exists(ys[i], eqs[i]));
    for (std::size_t i = 0; i < n; ++i) {
      const std::string k = std::to_string(i + 1);
      const Sequent left = with_right(s, exs[i]);
      const Sequent right = with_left(s, exs[i]);
      const NodeId l = make("exr" + k, left);
      const NodeId r = make("cut" + k, right);
      Annotation cut;
      cut.cut = exs[i];
      set(cur, RuleId::Cut, std::move(cut), {l, r});
      const Formula refl = Formula::equal(ts[i], ts[i]);
      auto succ = drop(left.succedent(), exs[i]);
      succ.push_back(refl);
      const NodeId q = make("eqr" + k, Sequent(left.antecedent(), std::move(succ)));
      Annotation exr;
      exr.target = exs[i];
      exr.term = ts[i];
      set(l, RuleId::ExR, std::move(exr), {q});
      Annotation eqr;
      eqr.target = refl;
      set(q, RuleId::EqR, std::move(eqr), {});
      cur = r;
      s = right;
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto ante = drop(s.antecedent(), exs[i]);
      ante.push_back(eqs[i]);
      const Sequent next(std::move(ante), s.succedent());
      const NodeId child = make("exl" + std::to_string(i + 1), next);
      Annotation a;
      a.target = exs[i];
      a.eigen = ys[i];
      set(cur, RuleId::ExL, std::move(a), {child});
      cur = child;
      s = next;
    }
  }

  // s is now y = t, prem[theta]. Each EqL turns the t_i at x_i's positions
  // into y_i; the equalities stay until the weakening.
  VarSet avoid = free_vars(prem);
  for (const auto& v : free_vars(concl)) avoid.insert(v);
  avoid.insert(xs.begin(), xs.end());
  avoid.insert(ys.begin(), ys.end());
  const std::string hole_l = primed_fresh("h", avoid);
  avoid.insert(hole_l);
  const std::string hole_r = primed_fresh("h", avoid);
  for (std::size_t i = 0; i < n; ++i) {
    std::map<std::string, Term> m;
    for (std::size_t j = 0; j < n; ++j)
      m.emplace(xs[j], j < i ? Term::var(ys[j]) : j == i ? Term::var(hole_r) : ts[j]);
    const Sequent body = apply_subst(prem, Substitution(m));
    auto tmpl_ante = body.antecedent();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) tmpl_ante.push_back(eqs[j]);
    m[xs[i]] = Term::var(ys[i]);
    const Sequent lifted = apply_subst(prem, Substitution(std::move(m)));
    auto ante = lifted.antecedent();
    ante.insert(ante.end(), eqs.begin(), eqs.end());
    const Sequent next(std::move(ante), lifted.succedent());
    const NodeId child = make("eql" + std::to_string(i + 1), next);
    Annotation a;
    a.target = eqs[i];
    a.hole_l = hole_l;
    a.hole_r = hole_r;
    a.tmpl = Sequent(std::move(tmpl_ante), body.succedent());
    set(cur, RuleId::EqL, std::move(a), {child});
    cur = child;
    s = next;
  }

  const Substitution atomic(std::move(renaming));
  const NodeId wk = make("wk", apply_subst(prem, atomic));
  set(cur, RuleId::Wk, {}, {wk});
  Annotation sub;
  sub.subst = atomic;
  set(wk, RuleId::Subst, std::move(sub), {above});
}

// ---------------------------------------------------------------------------
// Lifting

// Tie-back repeat test: same image, same sequent, and the image's inductive
// atoms instantiated identically, so an identity bud edge carries every
// trace slot for slot.
bool same_occurrence(const PreProof& src, const PreProof& tree, const OccMapFn& f, NodeId i,
                     NodeId j) {
  if (!f.image[i] || f.image[i] != f.image[j]) return false;
  if (tree.nodes[i].sequent != tree.nodes[j].sequent) return false;
  const Sequent& s = src.nodes[*f.image[i]].sequent;
  for (std::size_t k : s.inductive_slots()) {
    const Formula& c = s.antecedent()[k];
    if (apply_subst(c, f.theta[i]) != apply_subst(c, f.theta[j])) return false;
  }
  return true;
}

// Grows a tree of lifted occurrences. Each occurrence is a source node s
// (never a bud) and a substitution theta, with sequent seq(s)[theta]. Its
// rule is that of the first non-Subst node below s along Subst premises,
// instantiated under the accumulated substitution.
class Builder {
 public:
  Builder(const UnfoldedProof& u, const DefinitionSet& defs, std::size_t max_nodes)
      : u_(u), src_(u.source()), defs_(defs), max_nodes_(max_nodes) {}

  PreProof tree;
  OccMapFn f;
  std::vector<std::size_t> depth;
  std::vector<NodeId> parent;

  NodeId add_root() {
    const NodeId s = u_.resolve(src_.root);
    return add(s, Substitution(), src_.nodes[s].sequent, 0, kNoNode);
  }

  struct Expansion {
    RuleInstance instance;
    std::vector<NodeId> children;
    std::vector<Substitution> thetas;
  };

  Expansion expansion(NodeId id) const {
    NodeId cur = *f.image[id];
    Substitution theta = f.theta[id];
    for (std::size_t steps = 0; is_subst(src_.nodes[cur]); ++steps) {
      if (steps > src_.nodes.size()) throw Error(ErrorCode::InvalidInput, "cycle of Subst nodes");
      theta = compose(src_.nodes[cur].ann.subst, theta);
      cur = u_.resolve(src_.nodes[cur].premises.at(0));
    }
    if (src_.nodes[cur].kind != ProofNode::Kind::Rule)
      throw Error(ErrorCode::InvalidInput, "source node " + src_.nodes[cur].name + " is open");
    SubstApplication app = subst_apply_rule(src_.instance(cur), theta, defs_);
    Expansion e{std::move(app.instance), {}, std::move(app.premise_substs)};
    for (NodeId p : src_.nodes[cur].premises) e.children.push_back(u_.resolve(p));
    return e;
  }

  /// Applies an expansion; returns the new children.
  std::vector<NodeId> apply(NodeId id, Expansion e) {
    ProofNode& node = tree.nodes[id];
    node.kind = ProofNode::Kind::Rule;
    node.rule = e.instance.rule;
    node.ann = std::move(e.instance.ann);
    std::vector<NodeId> kids;
    for (std::size_t i = 0; i < e.children.size(); ++i)
      kids.push_back(add(e.children[i], std::move(e.thetas[i]), std::move(e.instance.premises[i]),
                         depth[id] + 1, id));
    tree.nodes[id].premises = kids;
    return kids;
  }

  void make_open(NodeId id) { tree.nodes[id].kind = ProofNode::Kind::Open; }

  void make_bud(NodeId id, NodeId companion) {
    tree.nodes[id].kind = ProofNode::Kind::Bud;
    tree.companions[id] = companion;
  }

  std::optional<NodeId> find_repeat(NodeId id) const {
    std::vector<NodeId> up;
    for (NodeId a = parent[id]; a != kNoNode; a = parent[a]) up.push_back(a);
    for (auto it = up.rbegin(); it != up.rend(); ++it)
      if (same_occurrence(src_, tree, f, *it, id)) return *it;
    return std::nullopt;
  }

 private:
  NodeId add(NodeId source, Substitution theta, Sequent seq, std::size_t d, NodeId up) {
    if (tree.nodes.size() >= max_nodes_)
      throw Error(ErrorCode::TooLarge, "lifting exceeded " + std::to_string(max_nodes_) + " nodes");
    ProofNode node;
    node.name = src_.nodes[source].name + "_" + std::to_string(++copies_[source]);
    node.sequent = std::move(seq);
    node.kind = ProofNode::Kind::Open;
    f.image.push_back(source);
    f.theta.push_back(std::move(theta));
    depth.push_back(d);
    parent.push_back(up);
    return tree.add(std::move(node));
  }

  const UnfoldedProof& u_;
  const PreProof& src_;
  const DefinitionSet& defs_;
  std::size_t max_nodes_;
  std::map<NodeId, std::size_t> copies_;
};

void require_atomic(const PreProof& src) {
  for (const auto& n : src.nodes)
    if (is_subst(n) && classify(n.ann.subst) != SubstKind::Atomic)
      throw Error(ErrorCode::CompositeSubstitution,
                  "node " + n.name + " carries composite " + to_string(n.ann.subst));
}

// Path through the source from occurrence image s to the resolved k-th
// premise of the rule the occurrence expands to.
std::vector<NodeId> source_segment(const PreProof& src, NodeId s, std::size_t k) {
  std::vector<NodeId> path{s};
  auto step = [&](NodeId p) {
    path.push_back(p);
    if (src.nodes[p].kind == ProofNode::Kind::Bud) path.push_back(src.companions.at(p));
    return path.back();
  };
  NodeId cur = s;
  for (std::size_t steps = 0; is_subst(src.nodes[cur]); ++steps) {
    if (steps > src.nodes.size()) throw std::logic_error("source_segment: Subst cycle");
    cur = step(src.nodes[cur].premises.at(0));
  }
  step(src.nodes[cur].premises.at(k));
  return path;
}

std::vector<NodeId> corresponding_segment(const ElimReport& r, const std::vector<NodeId>& path) {
  const PreProof& out = r.output;
  if (path.empty()) return {};
  std::vector<NodeId> res{r.fminus.image.at(path[0]).value()};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const NodeId a = path[i];
    const NodeId b = path[i + 1];
    if (out.nodes.at(a).kind == ProofNode::Kind::Bud) {
      if (out.companions.at(a) != b) throw std::invalid_argument("corresponding_path: not a path");
      continue;
    }
    const auto& ps = out.nodes[a].premises;
    const auto it = std::find(ps.begin(), ps.end(), b);
    if (it == ps.end()) throw std::invalid_argument("corresponding_path: not a path");
    const auto seg = source_segment(r.source, *r.fminus.image[a],
                                    static_cast<std::size_t>(it - ps.begin()));
    res.insert(res.end(), seg.begin() + 1, seg.end());
  }
  return res;
}

TiedProof compact(const PreProof& tree, const OccMapFn& f, const std::vector<bool>& keep) {
  TiedProof out;
  std::vector<NodeId> remap(tree.nodes.size(), kNoNode);
  for (NodeId i = 0; i < tree.nodes.size(); ++i)
    if (keep[i]) {
      remap[i] = out.proof.nodes.size();
      out.proof.nodes.push_back(tree.nodes[i]);
      out.f.image.push_back(f.image[i]);
      out.f.theta.push_back(f.theta[i]);
    }
  for (auto& n : out.proof.nodes)
    for (auto& p : n.premises) p = remap[p];
  for (const auto& [bud, comp] : tree.companions)
    if (keep[bud]) out.proof.companions[remap[bud]] = remap[comp];
  out.proof.root = remap[tree.root];
  return out;
}

}  // namespace

PreProof eliminate_composite(const PreProof& pre, const DefinitionSet& defs,
                             const RuleSet& rules) {
  (void)defs;
  std::vector<NodeId> targets;
  for (NodeId i = 0; i < pre.nodes.size(); ++i)
    if (is_subst(pre.nodes[i]) && classify(pre.nodes[i].ann.subst) == SubstKind::Composite)
      targets.push_back(i);
  if (targets.empty()) return pre;

  const bool freshl = has_all(rules, {RuleId::FreshL, RuleId::EqL, RuleId::Wk, RuleId::Subst});
  const bool cut = has_all(rules, {RuleId::Cut, RuleId::ExR, RuleId::EqR, RuleId::ExL,
                                   RuleId::EqL, RuleId::Wk, RuleId::Subst});
  if (!freshl && !cut)
    throw Error(ErrorCode::RuleSetTooWeak,
                "composite substitutions need Cut with the existential rules, or FreshL");

  PreProof out = pre;
  FreshNames names(free_vars(pre));
  NodeNamer namer(pre);
  for (NodeId id : targets) rewrite_composite(out, id, freshl, names, namer);
  return out;
}

LiftedTree lift_to_depth(const UnfoldedProof& u, std::size_t d, const DefinitionSet& defs,
                         std::size_t max_nodes) {
  require_atomic(u.source());
  Builder b(u, defs, max_nodes);
  std::vector<NodeId> stack{b.add_root()};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    auto e = b.expansion(id);
    if (!e.children.empty() && b.depth[id] >= d) continue;  // stays Open
    auto kids = b.apply(id, std::move(e));
    stack.insert(stack.end(), kids.rbegin(), kids.rend());
  }
  return {std::move(b.tree), std::move(b.f), std::move(b.depth)};
}

TiedProof tie_back(const LiftedTree& lifted, const PreProof& source) {
  const PreProof& t = lifted.tree;
  const auto parent = parent_table(t);
  std::vector<bool> keep(t.nodes.size(), false);
  PreProof marked = t;
  marked.companions.clear();
  std::vector<NodeId> stack{t.root};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    keep[id] = true;
    std::vector<NodeId> up;
    for (NodeId a = parent[id]; a != kNoNode; a = parent[a]) up.push_back(a);
    std::optional<NodeId> rep;
    for (auto it = up.rbegin(); it != up.rend() && !rep; ++it)
      if (same_occurrence(source, t, lifted.f, *it, id)) rep = *it;
    if (rep) {
      marked.nodes[id].kind = ProofNode::Kind::Bud;
      marked.nodes[id].premises.clear();
      marked.companions[id] = *rep;
      continue;
    }
    if (t.nodes[id].kind == ProofNode::Kind::Open)
      throw Error(ErrorCode::NoRepeatFound, "no repeat on the path to " + t.nodes[id].name +
                                                " at depth " + std::to_string(lifted.depth[id]));
    const auto& ps = t.nodes[id].premises;
    stack.insert(stack.end(), ps.rbegin(), ps.rend());
  }
  return compact(marked, lifted.f, keep);
}

ElimReport eliminate_subst(const PreProof& pre, const DefinitionSet& defs, const ElimConfig& cfg) {
  const EdgeTable input_edges = validate(pre, defs, cfg.rules);
  GtcVerdict input_verdict = check_gtc(pre, input_edges);
  if (!input_verdict.holds)
    throw Error(ErrorCode::InvalidInput, "the input does not satisfy the global trace condition");

  ElimReport r;
  if (count_rule(pre, RuleId::Subst) == 0) {
    r.source = pre;
    r.output = pre;
    // Buds map to their companions, as in a lifted output.
    const UnfoldedProof u(pre);
    for (NodeId i = 0; i < pre.nodes.size(); ++i) {
      r.fminus.image.push_back(u.resolve(i));
      r.fminus.theta.emplace_back();
    }
    r.stats.buds = pre.companions.size();
    if (cfg.verify) r.verification = std::move(input_verdict);
    return r;
  }

  for (const auto& n : pre.nodes)
    if (is_subst(n) && classify(n.ann.subst) == SubstKind::Composite) ++r.stats.composite_rewrites;
  r.source = eliminate_composite(pre, defs, cfg.rules);
  if (r.stats.composite_rewrites) validate(r.source, defs, cfg.rules);

  ClosureInput in;
  for (const auto& t : substitutions_of(r.source)) in.base.push_back(t);
  in.base.emplace_back();
  in.vars = free_vars(r.source);
  r.stats.closure_size = psc(in).size();
  r.stats.depth_bound = (r.source.nodes.size() + 1) * r.stats.closure_size + 1;

  const UnfoldedProof u(r.source);
  TiedProof tied;
  if (cfg.strategy == Strategy::Eager) {
    const std::size_t cap = cfg.depth_cap.value_or(r.stats.depth_bound);
    Builder b(u, defs, cfg.max_nodes);
    std::vector<NodeId> stack{b.add_root()};
    while (!stack.empty()) {
      const NodeId id = stack.back();
      stack.pop_back();
      if (auto rep = b.find_repeat(id)) {
        b.make_bud(id, *rep);
        continue;
      }
      auto e = b.expansion(id);
      if (!e.children.empty() && b.depth[id] >= cap) {
        const std::string where = "no repeat on the path to " + b.tree.nodes[id].name +
                                  " within depth " + std::to_string(cap);
        throw Error(cfg.depth_cap ? ErrorCode::DepthCapExceeded : ErrorCode::NoRepeatFound, where);
      }
      auto kids = b.apply(id, std::move(e));
      stack.insert(stack.end(), kids.rbegin(), kids.rend());
    }
    r.stats.nodes_generated = b.tree.nodes.size();
    tied = compact(b.tree, b.f, std::vector<bool>(b.tree.nodes.size(), true));
  } else {
    LiftedTree lifted = lift_to_depth(u, r.stats.depth_bound, defs, cfg.max_nodes);
    r.stats.nodes_generated = lifted.tree.nodes.size();
    tied = tie_back(lifted, r.source);
  }
  r.output = std::move(tied.proof);
  r.fminus = std::move(tied.f);
  r.stats.buds = r.output.companions.size();

  const auto parent = parent_table(r.output);
  for (NodeId i = 0; i < r.output.nodes.size(); ++i) {
    std::size_t d = 0;
    for (NodeId a = parent[i]; a != kNoNode; a = parent[a]) ++d;
    r.stats.depth_reached = std::max(r.stats.depth_reached, d);
  }
  const VarSet src_vars = free_vars(r.source);
  for (const auto& v : free_vars(r.output))
    if (!src_vars.count(v)) r.stats.namespace_extended = true;
  for (const auto& n : r.output.nodes) {
    if (n.ann.eigen && !src_vars.count(*n.ann.eigen)) r.stats.namespace_extended = true;
    for (const auto& ys : n.ann.fresh)
      for (const auto& y : ys)
        if (!src_vars.count(y)) r.stats.namespace_extended = true;
  }

  const EdgeTable out_edges = validate(r.output, defs, cfg.rules);
  if (cfg.verify) r.verification = check_gtc(r.output, out_edges);
  return r;
}

std::vector<NodeId> corresponding_path(const ElimReport& report, const std::vector<NodeId>& path) {
  if (!path.empty() && path.front() != report.output.root)
    throw std::invalid_argument("corresponding_path: path must start at the output root");
  return corresponding_segment(report, path);
}

bool check_trace_transport(const ElimReport& r, const DefinitionSet& defs, const RuleSet& rules) {
  const EdgeTable src = validate(r.source, defs, rules);
  const EdgeTable out = validate(r.output, defs, rules);

  // Output slot of each source slot, per output node.
  std::vector<std::vector<std::size_t>> phi(r.output.nodes.size());
  for (NodeId e = 0; e < r.output.nodes.size(); ++e) {
    if (!r.fminus.image[e]) return false;
    const Sequent& s = r.source.nodes[*r.fminus.image[e]].sequent;
    for (std::size_t k = 0; k < slot_count(s); ++k) {
      const std::size_t slot =
          r.output.nodes[e].sequent.slot_of(apply_subst(slot_formula(s, k), r.fminus.theta[e]));
      if (slot == Sequent::npos) return false;
      phi[e].push_back(slot);
    }
  }

  for (const Edge& e : out.edges) {
    const auto seg = corresponding_segment(r, {e.from, e.to});
    if (seg.back() != *r.fminus.image[e.to]) return false;
    const TraceRel want = path_relation(src, seg);
    const TraceRel have = TraceRel::from_pairs(out.slots[e.from], out.slots[e.to], e.pairs);
    for (const auto& p : want.pairs()) {
      const std::uint8_t cell = have.at(phi[e.from][p.from], phi[e.to][p.to]);
      if (cell == TraceRel::kNone || (p.progress && cell != TraceRel::kProgress)) return false;
    }
  }

  for (const auto& [bud, comp] : r.output.companions) {
    auto loop = tree_path(r.output, comp, bud);
    if (loop.empty()) return false;
    loop.push_back(comp);
    if (!idempotent_power(path_relation(out, loop)).has_progressing_diagonal()) return false;
    const auto src_loop = corresponding_segment(r, loop);
    if (src_loop.front() != src_loop.back()) return false;
    if (!idempotent_power(path_relation(src, src_loop)).has_progressing_diagonal()) return false;
  }
  return true;
}

}  // namespace cyclop
