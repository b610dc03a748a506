#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace shapim {

using NodeId = std::uint32_t;

/// Ordered seed nodes, in selection order.
using SeedSet = std::vector<NodeId>;

/// Per-node real-valued score, indexed by NodeId.
using ScoreTable = std::vector<double>;

struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  double weight = 1.0;
};

enum class Directedness { directed, undirected };

/// Tolerance on the incoming-weight sum for linear-threshold inputs.
inline constexpr double kLtSumTolerance = 1e-9;

/// Immutable directed weighted graph with CSR out/in adjacency and an
/// undirected projection (sorted, distinct neighbors ignoring direction).
///
/// Arcs are stored sorted by (source, target); arc index i in edges() is
/// also the position of that arc in the out-adjacency arrays.
class Graph {
 public:
  Graph() = default;

  /// Validates and builds. Throws ValidationError on self-loops, duplicate
  /// arcs, out-of-range ids or weights outside [0, 1]. Empty labels are
  /// replaced by the decimal node id.
  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges,
                          std::vector<std::string> labels = {});

  std::size_t node_count() const { return node_count_; }
  std::size_t arc_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v],
            out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const double> out_weights(NodeId v) const {
    return {out_weights_.data() + out_offsets_[v],
            out_weights_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v],
            in_sources_.data() + in_offsets_[v + 1]};
  }
  std::span<const double> in_weights(NodeId v) const {
    return {in_weights_.data() + in_offsets_[v],
            in_weights_.data() + in_offsets_[v + 1]};
  }
  std::size_t in_degree(NodeId v) const {
    return in_offsets_[v + 1] - in_offsets_[v];
  }
  std::size_t out_degree(NodeId v) const {
    return out_offsets_[v + 1] - out_offsets_[v];
  }

  /// Neighbors in the undirected projection, ascending.
  std::span<const NodeId> neighbors(NodeId v) const {
    return {nbrs_.data() + nbr_offsets_[v], nbrs_.data() + nbr_offsets_[v + 1]};
  }
  /// Degree in the undirected projection (no range check).
  std::size_t degree(NodeId v) const {
    return nbr_offsets_[v + 1] - nbr_offsets_[v];
  }
  std::size_t undirected_edge_count() const { return nbrs_.size() / 2; }

  /// Weight of arc u->v, if present.
  std::optional<double> weight(NodeId u, NodeId v) const;

  const std::string& label(NodeId v) const { return labels_[v]; }
  std::span<const std::string> labels() const { return labels_; }
  std::optional<NodeId> find_label(std::string_view label) const;

  /// Every node's incoming weights sum to at most 1 + kLtSumTolerance.
  bool satisfies_lt_invariant() const;

  /// Same structure and labels, weights replaced arc-for-arc (edges() order).
  Graph with_weights(std::span<const double> weights) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  void build_index();

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;

  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<double> out_weights_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_sources_;
  std::vector<double> in_weights_;
  std::vector<std::size_t> nbr_offsets_{0};
  std::vector<NodeId> nbrs_;
};

/// Parses the whitespace-separated edge-list format: `SRC TGT [W]` per line,
/// `#` comments and blank lines ignored, absent weight means 1.0.
///
/// Labels are mapped to dense ids in ascending order (numerically when every
/// label is an unsigned integer, lexicographically otherwise), so a graph
/// written by write_edge_list reloads with identical ids.
Graph read_edge_list(std::istream& in, Directedness directedness);
Graph load_edge_list(const std::string& path, Directedness directedness);

/// Writes every arc as `SRC TGT W` using node labels. Isolated nodes are not
/// representable in the format and are dropped.
void write_edge_list(std::ostream& out, const Graph& g);

struct WeightScheme {
  enum class Kind { uniform_ic, weighted_cascade, lt_uniform };
  Kind kind = Kind::weighted_cascade;
  double p = 0.0;  // uniform_ic only

  static WeightScheme uniform_ic(double p) { return {Kind::uniform_ic, p}; }
  static WeightScheme weighted_cascade() { return {Kind::weighted_cascade, 0.0}; }
  static WeightScheme lt_uniform() { return {Kind::lt_uniform, 0.0}; }

  /// Accepts `uniform-ic:P`, `weighted-cascade`, `lt-uniform`.
  static WeightScheme parse(std::string_view text);
  std::string to_string() const;
};

Graph apply_weights(const Graph& g, const WeightScheme& scheme);

/// Degree of v in the undirected projection; throws std::out_of_range.
std::size_t undirected_degree(const Graph& g, NodeId v);

}  // namespace shapim
