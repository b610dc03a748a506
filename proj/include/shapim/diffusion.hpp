#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "shapim/graph.hpp"
#include "shapim/rng.hpp"

namespace shapim {

/// IC reads an edge weight as an independent activation probability; LT reads
/// it as an influence weight against a uniform random per-node threshold.
enum class DiffusionModel { ic, lt };

DiffusionModel parse_model(std::string_view text);
std::string_view to_string(DiffusionModel model);

struct SpreadEstimate {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation over runs
  std::size_t runs = 0;
};

/// One cascade to fixpoint. Returns the active nodes (seeds included) in
/// activation order. Throws std::invalid_argument on an empty seed set or
/// invalid id, ValidationError on an LT run over a graph whose incoming
/// weights exceed 1.
std::vector<NodeId> simulate_once(const Graph& g, DiffusionModel model,
                                  std::span<const NodeId> seeds, rng::Engine& engine);

/// Mean and standard deviation of the activated count over `runs` cascades.
/// Run i draws from rng::stream(base_seed, spread_run, i), so the result is
/// bit-identical for any `threads` value (0 = OpenMP default).
SpreadEstimate estimate_spread(const Graph& g, DiffusionModel model,
                               std::span<const NodeId> seeds, std::size_t runs,
                               std::uint64_t base_seed, int threads = 0);

/// Live-edge draw: IC keeps each arc independently with its weight; LT keeps
/// at most one incoming arc per node, arc (u,v) with probability weight(u,v).
/// Indexed like g.edges().
std::vector<char> sample_live_edges(const Graph& g, DiffusionModel model,
                                    rng::Engine& engine);

/// Nodes reachable from `seeds` over live arcs, ascending.
std::vector<NodeId> live_edge_reach(const Graph& g, std::span<const char> live,
                                    std::span<const NodeId> seeds);

inline constexpr std::size_t kExactIcMaxEdges = 20;
inline constexpr std::size_t kExactLtMaxSelections = 1'000'000;

/// Exact IC expected spread by enumerating all 2^|E| live-edge subsets.
/// Throws RefusalError above kExactIcMaxEdges arcs.
double exact_spread_ic(const Graph& g, std::span<const NodeId> seeds);

/// Exact LT expected spread by enumerating every per-node in-arc selection.
/// Throws RefusalError when prod(indeg(v) + 1) exceeds kExactLtMaxSelections.
double exact_spread_lt(const Graph& g, std::span<const NodeId> seeds);

/// Per-node exact LT activation probabilities, same enumeration and bound as
/// exact_spread_lt (whose value is the sum of these).
std::vector<double> exact_activation_lt(const Graph& g, std::span<const NodeId> seeds);

}  // namespace shapim
