#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "shapim/diffusion.hpp"
#include "shapim/graph.hpp"
#include "shapim/ldag.hpp"

namespace shapim {

struct GreedyLdagOptions {
  int threads = 0;
  /// Called at the start of each round with every node's incremental gain
  /// against the current seed set.
  std::function<void(std::size_t round, std::span<const double> gains)> observer;
};

/// Greedy over LDAGs: each round adds the node maximizing
/// sum over LDAGs d containing v of ap_d(S + v) - ap_d(S), ties to the lowest
/// id. Only LDAGs containing the latest pick are re-evaluated per round.
SeedSet greedy_ldag_select(const Graph& g, std::size_t k, double theta,
                           const GreedyLdagOptions& options = {});
SeedSet greedy_ldag_select(std::span<const Ldag> ldags, std::size_t node_count, std::size_t k,
                           const GreedyLdagOptions& options = {});

/// Set function queried by the generic greedy drivers: spread of `seeds`.
/// `candidate` and `round` identify the evaluation for callers that key
/// random streams on them.
using SpreadOracle =
    std::function<double(std::span<const NodeId> seeds, NodeId candidate, std::size_t round)>;

/// Plain greedy: every round evaluates every unselected node.
SeedSet greedy_select(std::size_t node_count, std::size_t k, const SpreadOracle& spread);

/// CELF lazy greedy. Entries hold stale marginal gains in a max-queue
/// (ties to the lowest id); the top entry is re-evaluated against the current
/// seed set and selected once its gain is fresh. The first round is evaluated
/// concurrently, so `spread` must be thread-safe.
SeedSet lazy_greedy_select(std::size_t node_count, std::size_t k, const SpreadOracle& spread,
                           int threads = 0);

/// CELF with Monte Carlo spread: the evaluation of candidate v in round r
/// uses base seed rng::derive(seed, lazy_greedy, v, r).
SeedSet lazy_greedy_select(const Graph& g, DiffusionModel model, std::size_t k,
                           std::size_t runs_per_eval, std::uint64_t seed, int threads = 0);

/// d - 2t - (d - t) * t * p for degree d and t already-selected neighbors.
double degree_discount_score(std::size_t degree, std::size_t selected_neighbors, double p);

/// Degree Discount on the undirected projection, ties to the lowest id.
/// Throws std::invalid_argument for p outside (0,1] or k outside [1, n].
SeedSet degree_discount_select(const Graph& g, double p, std::size_t k);

}  // namespace shapim
