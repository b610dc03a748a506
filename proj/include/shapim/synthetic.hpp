#pragma once

#include <cstddef>
#include <cstdint>

#include "shapim/graph.hpp"
#include "shapim/rng.hpp"

namespace shapim {

struct PowerLawGraphOptions {
  std::size_t nodes = 2000;
  double exponent = 2.5;
  std::size_t min_out_degree = 1;
  std::size_t max_out_degree = 200;
  std::uint64_t seed = 1;
};

/// Directed graph whose out-degrees follow P(d) ~ d^-exponent on
/// [min_out_degree, max_out_degree]; each node's targets are distinct,
/// uniformly random other nodes. All weights are 1; apply a WeightScheme.
Graph power_law_out_degree_graph(const PowerLawGraphOptions& options);

/// Each ordered (directed) or unordered (undirected, both arcs materialized)
/// pair becomes an edge with probability `edge_probability`; weights drawn
/// uniformly from [0, 1].
Graph random_graph(std::size_t nodes, double edge_probability, Directedness directedness,
                   rng::Engine& engine);

/// Random DAG on `nodes` nodes in which every arc runs from a lower to a
/// higher id and node nodes-1 is reachable from all others, with
/// linear-threshold weights (incoming sums at most 1).
Graph random_lt_dag(std::size_t nodes, double edge_probability, rng::Engine& engine);

}  // namespace shapim
