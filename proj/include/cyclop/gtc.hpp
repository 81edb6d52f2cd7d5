#pragma once

// Global trace condition: every infinite path of the path graph has a tail
// carrying a trace that progresses infinitely often.

#include <cstdint>
#include <optional>
#include <vector>

#include "cyclop/proofgraph.hpp"

namespace cyclop {

/// Relation between the trace slots of two nodes. A cell is kNone, kPair or
/// kProgress; composition takes the best witness over the middle slot.
class TraceRel {
 public:
  static constexpr std::uint8_t kNone = 0;
  static constexpr std::uint8_t kPair = 1;
  static constexpr std::uint8_t kProgress = 2;

  TraceRel() = default;
  TraceRel(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols) {}

  static TraceRel identity(std::size_t n);
  static TraceRel from_pairs(std::size_t rows, std::size_t cols,
                             const std::vector<TracePair>& pairs);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint8_t at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
  /// Keeps the stronger of the old and new value.
  void raise(std::size_t i, std::size_t j, std::uint8_t v);

  bool has_progressing_diagonal() const;
  bool idempotent() const;
  std::vector<TracePair> pairs() const;

  friend bool operator==(const TraceRel&, const TraceRel&) = default;
  friend auto operator<=>(const TraceRel&, const TraceRel&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

/// `a` then `b`. Requires a.cols() == b.rows().
TraceRel compose(const TraceRel& a, const TraceRel& b);

/// Composed relation along a path of at least one node.
TraceRel path_relation(const EdgeTable& edges, const std::vector<NodeId>& path);

/// The first power R^k (k >= 1) with R^k R^k = R^k. Requires a square relation.
TraceRel idempotent_power(const TraceRel& r);

struct Lasso {
  /// Root to the loop's first node, inclusive.
  std::vector<NodeId> stem;
  /// Starts and ends at the same node.
  std::vector<NodeId> loop;
  /// Idempotent, composed along `loop`, no progressing diagonal cell.
  TraceRel loop_rel;
};

struct CertificateEntry {
  std::vector<NodeId> loop;
  TraceRel rel;
};

struct GtcVerdict {
  bool holds = false;
  /// One entry per idempotent loop summary when the condition holds.
  std::vector<CertificateEntry> certificate;
  std::optional<Lasso> counterexample;
  /// Size of the summary closure that decided the verdict.
  std::size_t summaries = 0;
};

/// Decides the condition over companion-to-companion segment summaries.
/// Uses only the root of `pre`; structure comes from the edge table.
GtcVerdict check_gtc(const PreProof& pre, const EdgeTable& edges);

/// Independent decision by saturating summaries over every node and edge.
/// Only `holds` and `summaries` are filled. Throws TooLarge above
/// `node_cap` nodes.
GtcVerdict gtc_oracle(const PreProof& pre, const EdgeTable& edges, std::size_t node_cap = 64);

/// The lasso is a genuine path from the root and the idempotent power of
/// its loop relation has no progressing diagonal cell.
bool verify_lasso(const PreProof& pre, const EdgeTable& edges, const Lasso& lasso);

/// Each entry's loop is a closed path whose relation equals the entry's
/// relation, which is idempotent with a progressing diagonal cell.
bool verify_certificate(const EdgeTable& edges, const GtcVerdict& verdict);

}  // namespace cyclop
