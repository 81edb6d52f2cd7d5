#include "cyclop/gtc.hpp"

#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "cyclop/error.hpp"

namespace cyclop {

TraceRel TraceRel::identity(std::size_t n) {
  TraceRel r(n, n);
  for (std::size_t i = 0; i < n; ++i) r.raise(i, i, kPair);
  return r;
}

TraceRel TraceRel::from_pairs(std::size_t rows, std::size_t cols,
                              const std::vector<TracePair>& pairs) {
  TraceRel r(rows, cols);
  for (const auto& p : pairs) {
    if (p.from >= rows || p.to >= cols) throw std::out_of_range("TraceRel: pair outside the slots");
    r.raise(p.from, p.to, p.progress ? kProgress : kPair);
  }
  return r;
}

void TraceRel::raise(std::size_t i, std::size_t j, std::uint8_t v) {
  auto& c = cells_[i * cols_ + j];
  if (v > c) c = v;
}

bool TraceRel::has_progressing_diagonal() const {
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
    if (at(i, i) == kProgress) return true;
  return false;
}

bool TraceRel::idempotent() const { return rows_ == cols_ && compose(*this, *this) == *this; }

std::vector<TracePair> TraceRel::pairs() const {
  std::vector<TracePair> out;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (at(i, j) != kNone) out.push_back({i, j, at(i, j) == kProgress});
  return out;
}

TraceRel compose(const TraceRel& a, const TraceRel& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("compose: slot counts differ");
  TraceRel r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const std::uint8_t x = a.at(i, j);
      if (x == TraceRel::kNone) continue;
      for (std::size_t k = 0; k < b.cols(); ++k) {
        const std::uint8_t y = b.at(j, k);
        if (y != TraceRel::kNone) r.raise(i, k, std::max(x, y));
      }
    }
  return r;
}

TraceRel path_relation(const EdgeTable& edges, const std::vector<NodeId>& path) {
  if (path.empty()) throw std::invalid_argument("path_relation: empty path");
  TraceRel r = TraceRel::identity(edges.slots.at(path[0]));
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const std::size_t e = edges.find(path[i], path[i + 1]);
    if (e == EdgeTable::npos) throw std::invalid_argument("path_relation: not a path");
    r = compose(r, TraceRel::from_pairs(edges.slots[path[i]], edges.slots[path[i + 1]],
                                        edges.edges[e].pairs));
  }
  return r;
}

TraceRel idempotent_power(const TraceRel& r) {
  if (r.rows() != r.cols()) throw std::invalid_argument("idempotent_power: not square");
  // The powers of r form a finite cyclic sequence, so some power is idempotent.
  TraceRel p = r;
  while (!p.idempotent()) p = compose(p, r);
  return p;
}

namespace {

struct Segment {
  std::vector<NodeId> path;
  TraceRel rel;
};

// Every companion-to-companion segment: down the tree from a companion to a
// bud, then across the bud's back edge.
std::vector<Segment> segments(const EdgeTable& edges) {
  std::set<NodeId> companions;
  for (const auto& e : edges.edges)
    if (e.back) companions.insert(e.to);
  std::vector<Segment> out;
  for (NodeId c : companions) {
    std::vector<Segment> stack{{{c}, TraceRel::identity(edges.slots[c])}};
    while (!stack.empty()) {
      Segment s = std::move(stack.back());
      stack.pop_back();
      const NodeId at = s.path.back();
      const auto& outs = edges.out[at];
      for (auto it = outs.rbegin(); it != outs.rend(); ++it) {
        const Edge& e = edges.edges[*it];
        Segment next{s.path, compose(s.rel, TraceRel::from_pairs(edges.slots[e.from],
                                                                 edges.slots[e.to], e.pairs))};
        next.path.push_back(e.to);
        if (e.back)
          out.push_back(std::move(next));
        else
          stack.push_back(std::move(next));
      }
    }
  }
  return out;
}

struct Summary {
  NodeId from;
  NodeId to;
  TraceRel rel;
  // Derived from segment `left`, or by composing summaries left and right.
  bool base;
  std::size_t left;
  std::size_t right;
};

std::vector<NodeId> expand(const std::vector<Summary>& all, const std::vector<Segment>& segs,
                           std::size_t root) {
  std::vector<NodeId> out;
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    const Summary& s = all[stack.back()];
    stack.pop_back();
    if (!s.base) {
      stack.push_back(s.right);
      stack.push_back(s.left);
      continue;
    }
    const auto& p = segs[s.left].path;
    out.insert(out.end(), p.begin() + (out.empty() ? 0 : 1), p.end());
  }
  return out;
}

std::vector<NodeId> tree_stem(const PreProof& pre, const EdgeTable& edges, NodeId target) {
  std::vector<NodeId> parent(edges.out.size(), kNoNode);
  std::vector<NodeId> stack{pre.root};
  while (!stack.empty()) {
    const NodeId at = stack.back();
    stack.pop_back();
    for (std::size_t e : edges.out[at]) {
      const Edge& edge = edges.edges[e];
      if (edge.back) continue;
      parent[edge.to] = at;
      stack.push_back(edge.to);
    }
  }
  std::vector<NodeId> path{target};
  while (path.back() != pre.root) {
    const NodeId up = parent[path.back()];
    if (up == kNoNode) return {};
    path.push_back(up);
  }
  return {path.rbegin(), path.rend()};
}

}  // namespace

GtcVerdict check_gtc(const PreProof& pre, const EdgeTable& edges) {
  const std::vector<Segment> segs = segments(edges);
  std::vector<Summary> all;
  std::map<std::tuple<NodeId, NodeId, TraceRel>, std::size_t> index;
  std::map<NodeId, std::vector<std::size_t>> by_from;
  std::map<NodeId, std::vector<std::size_t>> by_to;
  std::deque<std::size_t> work;

  auto add = [&](Summary s) {
    auto [it, fresh] = index.emplace(std::make_tuple(s.from, s.to, s.rel), all.size());
    if (!fresh) return;
    by_from[s.from].push_back(all.size());
    by_to[s.to].push_back(all.size());
    work.push_back(all.size());
    all.push_back(std::move(s));
  };
  for (std::size_t i = 0; i < segs.size(); ++i)
    add({segs[i].path.front(), segs[i].path.back(), segs[i].rel, true, i, 0});

  GtcVerdict v;
  while (!work.empty()) {
    const std::size_t i = work.front();
    work.pop_front();
    if (all[i].from == all[i].to && all[i].rel.idempotent() &&
        !all[i].rel.has_progressing_diagonal()) {
      Lasso lasso;
      lasso.loop = expand(all, segs, i);
      lasso.stem = tree_stem(pre, edges, all[i].from);
      lasso.loop_rel = all[i].rel;
      v.counterexample = std::move(lasso);
      v.summaries = all.size();
      return v;
    }
    // Snapshots: summaries added below are composed when they are processed.
    const auto right = by_from[all[i].to];
    for (std::size_t j : right)
      add({all[i].from, all[j].to, compose(all[i].rel, all[j].rel), false, i, j});
    const auto left = by_to[all[i].from];
    for (std::size_t j : left)
      add({all[j].from, all[i].to, compose(all[j].rel, all[i].rel), false, j, i});
  }
  v.holds = true;
  v.summaries = all.size();
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i].from == all[i].to && all[i].rel.idempotent())
      v.certificate.push_back({expand(all, segs, i), all[i].rel});
  return v;
}

// ---------------------------------------------------------------------------
// Oracle. Deliberately shares nothing with the closure above beyond the
// edge table: relations are pair sets and saturation is a plain fixpoint.

namespace {

using PairRel = std::map<std::pair<std::size_t, std::size_t>, bool>;

PairRel oracle_compose(const PairRel& a, const PairRel& b) {
  PairRel out;
  for (const auto& [ij, p] : a)
    for (const auto& [jk, q] : b)
      if (ij.second == jk.first) {
        bool& cell = out[{ij.first, jk.second}];
        cell = cell || p || q;
      }
  return out;
}

}  // namespace

GtcVerdict gtc_oracle(const PreProof& pre, const EdgeTable& edges, std::size_t node_cap) {
  (void)pre;
  if (edges.out.size() > node_cap)
    throw Error(ErrorCode::TooLarge, std::to_string(edges.out.size()) + " nodes exceed the oracle cap of " +
                                         std::to_string(node_cap));
  using Triple = std::tuple<NodeId, NodeId, PairRel>;
  std::set<Triple> closure;
  for (const Edge& e : edges.edges) {
    PairRel r;
    for (const auto& p : e.pairs) {
      bool& cell = r[{p.from, p.to}];
      cell = cell || p.progress;
    }
    closure.emplace(e.from, e.to, std::move(r));
  }
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Triple> found;
    for (const auto& [a, b, r] : closure)
      for (const auto& [c, d, s] : closure)
        if (b == c) {
          Triple t{a, d, oracle_compose(r, s)};
          if (!closure.count(t)) found.push_back(std::move(t));
        }
    for (auto& t : found) changed = closure.insert(std::move(t)).second || changed;
  }
  GtcVerdict v;
  v.holds = true;
  v.summaries = closure.size();
  for (const auto& [a, b, r] : closure) {
    if (a != b || oracle_compose(r, r) != r) continue;
    bool progress = false;
    for (const auto& [ij, p] : r) progress = progress || (p && ij.first == ij.second);
    if (!progress) v.holds = false;
  }
  return v;
}

bool verify_lasso(const PreProof& pre, const EdgeTable& edges, const Lasso& lasso) {
  const auto& stem = lasso.stem;
  const auto& loop = lasso.loop;
  if (stem.empty() || loop.size() < 2) return false;
  if (stem.front() != pre.root || stem.back() != loop.front() || loop.front() != loop.back())
    return false;
  if (!is_path(edges, stem) || !is_path(edges, loop)) return false;
  const TraceRel r = path_relation(edges, loop);
  return r == lasso.loop_rel && r.idempotent() && !idempotent_power(r).has_progressing_diagonal();
}

bool verify_certificate(const EdgeTable& edges, const GtcVerdict& verdict) {
  if (!verdict.holds) return false;
  for (const auto& entry : verdict.certificate) {
    if (entry.loop.size() < 2 || entry.loop.front() != entry.loop.back()) return false;
    if (!is_path(edges, entry.loop)) return false;
    if (path_relation(edges, entry.loop) != entry.rel) return false;
    if (!entry.rel.idempotent() || !entry.rel.has_progressing_diagonal()) return false;
  }
  return true;
}

}  // namespace cyclop
