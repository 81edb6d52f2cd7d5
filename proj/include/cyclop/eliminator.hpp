#pragma once

// Substitution elimination. Composite substitutions are first rewritten
// into atomic ones by a local gadget; atomic ones are then pushed up the
// tree unfolding and the lifted tree is closed again by tying repeated
// occurrences back to their ancestors.

#include <cstddef>
#include <optional>
#include <vector>

#include "cyclop/gtc.hpp"
#include "cyclop/proofgraph.hpp"

namespace cyclop {

/// Maps occurrences of a constructed proof to occurrences of its source.
/// Every mapped e satisfies seq(e) == seq(image(e))[theta(e)].
struct OccMapFn {
  /// nullopt is the no-correspondence sentinel.
  std::vector<std::optional<NodeId>> image;
  std::vector<Substitution> theta;
};

/// Rewrites every Subst with a composite substitution into a gadget whose
/// only Subst is atomic. Uses (FreshL) when `rules` has it, else Cut with
/// the existential rules. Original nodes keep their ids; a rewritten Subst
/// node becomes the gadget's bottom node. Throws RuleSetTooWeak when a
/// composite substitution is present and neither gadget is available.
PreProof eliminate_composite(const PreProof& pre, const DefinitionSet& defs,
                             const RuleSet& rules = RuleSet::full());

/// Materialized lifting of the unfolding: no Subst up to depth `d`, every
/// internal node at depth `d` left Open.
struct LiftedTree {
  PreProof tree;
  OccMapFn f;
  std::vector<std::size_t> depth;
};

/// Throws CompositeSubstitution when the source has a composite Subst and
/// TooLarge beyond `max_nodes` generated nodes.
LiftedTree lift_to_depth(const UnfoldedProof& u, std::size_t d, const DefinitionSet& defs,
                         std::size_t max_nodes = 1'000'000);

struct TiedProof {
  PreProof proof;
  OccMapFn f;
};

/// `source` is the proof the lifting unfolded. On every root-to-leaf path,
/// takes the first occurrence e_j (lowest j) that repeats an ancestor e_i
/// (lowest i): same image, same sequent, and the same instances of the
/// image's inductive atoms. e_j becomes a bud of e_i. Throws NoRepeatFound
/// when an Open leaf is reached first.
TiedProof tie_back(const LiftedTree& lifted, const PreProof& source);

enum class Strategy { Eager, WorstCaseBound };

struct ElimConfig {
  Strategy strategy = Strategy::Eager;
  RuleSet rules = RuleSet::full();
  /// Eager only; defaults to the worst-case depth.
  std::optional<std::size_t> depth_cap;
  bool verify = true;
  std::size_t max_nodes = 1'000'000;
};

struct ElimStats {
  std::size_t composite_rewrites = 0;
  /// Size of the closure the lifted substitutions live in.
  std::size_t closure_size = 0;
  /// (#source occurrences + 1) * closure_size + 1.
  std::size_t depth_bound = 0;
  std::size_t depth_reached = 0;
  std::size_t nodes_generated = 0;
  std::size_t buds = 0;
  /// Some output annotation uses a name outside FV(source).
  bool namespace_extended = false;
};

struct ElimReport {
  /// The atomic-only proof the lifting worked on; fminus points into it.
  PreProof source;
  PreProof output;
  OccMapFn fminus;
  ElimStats stats;
  std::optional<GtcVerdict> verification;
};

/// Requires `pre` to validate under cfg.rules and satisfy the trace
/// condition (InvalidInput otherwise). Throws RuleSetTooWeak,
/// DepthCapExceeded, NoRepeatFound or TooLarge.
ElimReport eliminate_subst(const PreProof& pre, const DefinitionSet& defs,
                           const ElimConfig& cfg = {});

/// Source path followed by a path of the output, which must start at the
/// output root and be a path of the output.
std::vector<NodeId> corresponding_path(const ElimReport& report, const std::vector<NodeId>& path);

/// Every output edge carries, under the occurrence maps, every trace pair of
/// its corresponding source segment with progress intact; every output cycle
/// closed by a bud has a progressing idempotent loop relation, as does its
/// corresponding source loop.
bool check_trace_transport(const ElimReport& report, const DefinitionSet& defs,
                           const RuleSet& rules);

}  // namespace cyclop
