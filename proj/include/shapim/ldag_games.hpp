#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "shapim/graph.hpp"
#include "shapim/ldag.hpp"
#include "shapim/rng.hpp"

namespace shapim {

enum class IndexKind { shapley, banzhaf };

IndexKind parse_index_kind(std::string_view text);
std::string_view to_string(IndexKind kind);

/// Cooperative game on one LDAG. Every member is a player, identified by its
/// topological position; a coalition's value is the root's activation
/// probability with that coalition seeded.
class LdagGame {
 public:
  explicit LdagGame(const Ldag& ldag) : ldag_(&ldag) {}

  const Ldag& ldag() const { return *ldag_; }
  std::size_t players() const { return ldag_->size(); }
  double value(std::span<const char> seeded) const {
    return activation_probability_local(*ldag_, seeded);
  }

 private:
  const Ldag* ldag_;
};

/// Shapley value by permutation sampling, indexed by player position. Each
/// sampled ordering adds marginals that telescope to the grand-coalition
/// value 1, so the result sums to 1 up to rounding for any sample count.
std::vector<double> mc_shapley_ldag(const LdagGame& game, std::size_t permutations,
                                    rng::Engine& engine);

inline constexpr std::size_t kExactShapleyMaxPlayers = 9;
inline constexpr std::size_t kExactBanzhafMaxPlayers = 12;

/// Exact index by full enumeration (orderings for Shapley, coalitions for
/// Banzhaf), indexed by player position. Throws RefusalError beyond
/// kExactShapleyMaxPlayers / kExactBanzhafMaxPlayers.
std::vector<double> exact_index_ldag(const LdagGame& game, IndexKind kind);

/// Positions that can reach the target (ancestors) and that the target can
/// reach (descendants), ascending. Other players cannot change the target's
/// marginal contribution.
struct InfluenceCones {
  std::vector<std::uint32_t> ancestors;
  std::vector<std::uint32_t> descendants;
};
InfluenceCones influence_cones(const Ldag& d, std::uint32_t target);

/// Banzhaf index of `target` via the cone split: the marginal of v given C is
/// (1 - ap(v | C among ancestors)) * coef(v -> root | C among descendants),
/// and the two halves of a uniform random coalition are independent, so each
/// factor is averaged separately over `samples` uniform subsets of its cone.
/// Throws std::invalid_argument if target is not a member.
double mc_banzhaf_ldag(const LdagGame& game, NodeId target, std::size_t samples,
                       rng::Engine& engine);

inline constexpr std::size_t kExhaustiveConeMax = 20;

/// The same decomposition with both factors averaged over every subset of
/// their cone instead of samples. Throws RefusalError when a cone exceeds
/// kExhaustiveConeMax players.
double banzhaf_by_cone_enumeration(const LdagGame& game, NodeId target);

/// Index values of one LDAG game, keyed by global node id.
struct LdagScores {
  NodeId root = 0;
  std::vector<NodeId> nodes;
  std::vector<double> values;
};

/// Global score(v) = sum of v's values over every LDAG that contains it.
/// Contributions are summed in ascending root order, so the result is
/// bit-identical for any permutation of `per_ldag`.
ScoreTable merge_indices(std::span<const LdagScores> per_ldag, std::size_t node_count);

/// `root,node,index` CSV with a header row, using node labels.
void write_index_csv(std::ostream& out, std::span<const LdagScores> per_ldag,
                     const Graph& g);
std::vector<LdagScores> read_index_csv(std::istream& in, const Graph& g);

struct LdagIndexOptions {
  double theta = kDefaultLdagTheta;
  IndexKind kind = IndexKind::shapley;
  /// Permutations per LDAG (Shapley) or subset samples per factor (Banzhaf).
  std::size_t budget = 200;
  std::uint64_t seed = 0;
  /// Use exact_index_ldag instead of sampling (small LDAGs only).
  bool exact = false;
  int threads = 0;
};

/// Index tables for every LDAG in `ldags`. The game rooted at r draws from
/// streams keyed by (seed, r), so concurrent and serial runs agree exactly.
std::vector<LdagScores> ldag_index_scores(std::span<const Ldag> ldags,
                                          const LdagIndexOptions& options);

/// Builds one LDAG per node, scores each game, merges additively and returns
/// the top-k nodes (ties to the lowest id).
SeedSet ldag_index_select(const Graph& g, std::size_t k, const LdagIndexOptions& options,
                          std::vector<LdagScores>* scores_out = nullptr);

}  // namespace shapim
