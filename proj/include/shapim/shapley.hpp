#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "shapim/graph.hpp"

namespace shapim {

/// Sorted set of distinct node ids. Only the brute-force oracles build these.
class Coalition {
 public:
  Coalition() = default;
  explicit Coalition(std::vector<NodeId> members);

  std::span<const NodeId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(NodeId v) const;

 private:
  std::vector<NodeId> members_;
};

/// Nodes outside C adjacent (undirected projection) to some member of C.
/// 0 for the empty coalition.
std::size_t surrounding_value(const Graph& g, const Coalition& c);

/// |C| plus the surrounding of C: the fringe game's value.
std::size_t fringe_value(const Graph& g, const Coalition& c);

/// Closed form of the fringe game's Shapley value:
/// sum over u in {v} + N(v) of 1 / (1 + deg(u)).
ScoreTable fringe_shapley(const Graph& g);

/// Closed form of the surrounding game's Shapley value: fringe value minus 1.
ScoreTable surrounding_shapley(const Graph& g);

using CoalitionValue = std::function<double(const Coalition&)>;

inline constexpr std::size_t kBruteForceShapleyMaxNodes = 9;

/// Exact Shapley value with every node a player, by enumerating all
/// node_count! orderings. `value` is queried once per coalition.
/// Throws RefusalError above kBruteForceShapleyMaxNodes nodes.
ScoreTable brute_force_shapley(const Graph& g, const CoalitionValue& value);

/// State handed to a DsvOptions observer after each selection step.
struct DsvStep {
  std::size_t iteration = 0;
  NodeId pick = 0;
  bool fallback = false;  // picked by initial score after everything was infected
  std::span<const double> scores;
  std::span<const char> infected;
};

struct DsvOptions {
  /// Compatibility mode: discount the neighbors of every
  /// neighbor of the pick on each iteration, whether or not that neighbor was
  /// already infected, and never discount for the pick itself.
  bool unguarded_discount = false;
  std::function<void(const DsvStep&)> observer;
};

/// Scores closer than this are treated as tied by dsv_select.
inline constexpr double kScoreTieTolerance = 1e-9;

/// Discounted Shapley Value seed selection on the undirected projection.
///
/// Scores start as sum over u in N(v) of 1/(1+deg(u)) (no self term). Each
/// step picks the uninfected node with the highest current score, infects it
/// and its neighbors, and for every node u infected in that step subtracts
/// 1/(1+deg(u)) from the score of each neighbor of u. Once every node is
/// infected, remaining picks follow the initial scores. Scores within
/// kScoreTieTolerance of the best are ties, resolved to the lowest id.
///
/// Throws std::invalid_argument unless 1 <= k <= node_count.
SeedSet dsv_select(const Graph& g, std::size_t k, const DsvOptions& options = {});

/// Top-k nodes by score, ties to the lowest id.
SeedSet top_k(std::span<const double> scores, std::size_t k);

}  // namespace shapim
