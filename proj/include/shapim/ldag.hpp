#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "shapim/graph.hpp"

namespace shapim {

inline constexpr double kDefaultLdagTheta = 1.0 / 320.0;

/// Arc inside an Ldag, endpoints given as topological positions.
struct LocalArc {
  std::uint32_t node = 0;  // source for in-arcs, target for out-arcs
  double weight = 0.0;
};

/// Local DAG rooted at one node: members in topological order with the root
/// last, arcs running from lower to higher positions, and each member's
/// path-weight influence on the root.
class Ldag {
 public:
  NodeId root() const { return members_.back(); }
  double theta() const { return theta_; }
  std::size_t size() const { return members_.size(); }
  std::size_t arc_count() const { return in_sources_.size(); }

  /// Members by topological position; root() is members().back().
  std::span<const NodeId> members() const { return members_; }
  std::span<const double> influence() const { return influence_; }

  std::optional<std::uint32_t> position(NodeId v) const;

  std::span<const LocalArc> in_arcs(std::uint32_t pos) const {
    return {in_sources_.data() + in_offsets_[pos],
            in_sources_.data() + in_offsets_[pos + 1]};
  }
  std::span<const LocalArc> out_arcs(std::uint32_t pos) const {
    return {out_targets_.data() + out_offsets_[pos],
            out_targets_.data() + out_offsets_[pos + 1]};
  }

  /// Graph arcs between members left out to keep the result acyclic.
  std::size_t dropped_arcs() const { return dropped_arcs_; }

  /// Takes every ancestor of `root` in a DAG-shaped `g` with all arcs among
  /// them. theta() reports the smallest member influence. Throws
  /// ValidationError if the ancestor subgraph has a cycle.
  static Ldag from_dag(const Graph& g, NodeId root);

 private:
  friend Ldag build_ldag(const Graph& g, NodeId root, double theta);

  // Keeps every graph arc between members that runs forward in `order`.
  // Influence is recomputed from the arcs unless given (by position).
  static Ldag assemble(std::vector<NodeId> order, const Graph& g, double theta,
                       std::size_t dropped, std::vector<double> influence = {});

  double theta_ = 1.0;
  std::vector<NodeId> members_;
  std::vector<double> influence_;
  std::vector<std::pair<NodeId, std::uint32_t>> index_;  // sorted by node
  std::vector<std::size_t> in_offsets_;
  std::vector<LocalArc> in_sources_;
  std::vector<std::size_t> out_offsets_;
  std::vector<LocalArc> out_targets_;
  std::size_t dropped_arcs_ = 0;
};

/// Greedy local DAG for `root` on an LT-weighted graph. Starting from {root},
/// repeatedly admits the outside node x with the largest
/// Inf(x) = sum over arcs x->w into members of weight(x,w) * Inf(w), as long
/// as Inf(x) >= theta (ties to the lowest id). An arc x->w between members is
/// kept when w was admitted before x.
///
/// Throws std::invalid_argument for theta outside (0,1] or a bad root. The
/// LT weight invariant is the caller's responsibility (build_all_ldags checks).
Ldag build_ldag(const Graph& g, NodeId root, double theta);

/// One Ldag per node, index = root. Roots are built concurrently; the result
/// does not depend on `threads` (0 = OpenMP default).
std::vector<Ldag> build_all_ldags(const Graph& g, double theta, int threads = 0);

/// Root activation probability under LT with `coalition` seeded:
/// ap(x) = 1 for seeded x, else the weighted sum of ap over x's in-arcs.
/// Throws std::invalid_argument if a coalition node is not a member.
double activation_probability(const Ldag& d, std::span<const NodeId> coalition);

/// Same DP with the coalition given as a per-position flag array.
double activation_probability_local(const Ldag& d, std::span<const char> seeded);

/// Debug dump: `# root=R theta=T` header, then `SRC TGT W` per arc (labels).
void write_ldag(std::ostream& out, const Ldag& d, const Graph& g);

}  // namespace shapim
