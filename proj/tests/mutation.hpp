#pragma once

// Random perturbations of validated edge tables, for differential testing
// of the trace-condition deciders.

#include <random>

#include "cyclop/proofgraph.hpp"

namespace cyclop::test {

inline void mutate(EdgeTable& t, std::mt19937& rng) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  if (t.edges.empty()) return;
  Edge& e = t.edges[pick(t.edges.size())];
  const std::size_t rows = t.slots[e.from];
  switch (pick(4)) {
    case 0:
      if (!e.pairs.empty()) e.pairs.erase(e.pairs.begin() + static_cast<long>(pick(e.pairs.size())));
      break;
    case 1:
      if (!e.pairs.empty()) {
        auto& p = e.pairs[pick(e.pairs.size())];
        p.progress = !p.progress;
      }
      break;
    case 2: {
      const std::size_t cols = t.slots[e.to];
      if (rows && cols) e.pairs.push_back({pick(rows), pick(cols), pick(2) == 1});
      break;
    }
    default: {
      // Retarget a back edge at another internal node.
      if (!e.back) break;
      std::vector<NodeId> internal;
      for (NodeId n = 0; n < t.out.size(); ++n)
        if (!t.out[n].empty() && !t.edges[t.out[n][0]].back) internal.push_back(n);
      if (internal.empty()) break;
      e.to = internal[pick(internal.size())];
      const std::size_t cols = t.slots[e.to];
      e.pairs.clear();
      for (std::size_t s = 0; s < std::min(rows, cols); ++s)
        if (pick(3) != 0) e.pairs.push_back({s, s, false});
      break;
    }
  }
}

}  // namespace cyclop::test
