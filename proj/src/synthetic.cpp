#include "shapim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace shapim {

Graph power_law_out_degree_graph(const PowerLawGraphOptions& options) {
  const std::size_t n = options.nodes;
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  const std::size_t lo = std::max<std::size_t>(options.min_out_degree, 1);
  const std::size_t hi = std::min(options.max_out_degree, n - 1);
  if (lo > hi) throw std::invalid_argument("empty out-degree range");

  std::vector<double> mass;
  for (std::size_t d = lo; d <= hi; ++d) {
    mass.push_back(std::pow(static_cast<double>(d), -options.exponent));
  }
  std::discrete_distribution<std::size_t> degree_dist(mass.begin(), mass.end());
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  auto engine = rng::stream(options.seed, rng::Purpose::synthetic_graph, n);

  std::vector<Edge> edges;
  std::unordered_set<std::size_t> targets;
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t out = lo + degree_dist(engine);
    targets.clear();
    while (targets.size() < out) {
      const std::size_t v = pick(engine);
      if (v != u && targets.insert(v).second) {
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0});
      }
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph random_graph(std::size_t nodes, double edge_probability, Directedness directedness,
                   rng::Engine& engine) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < nodes; ++u) {
    for (std::size_t v = 0; v < nodes; ++v) {
      if (u == v) continue;
      if (directedness == Directedness::undirected && v < u) continue;
      if (rng::uniform01(engine) >= edge_probability) continue;
      const double w = rng::uniform01(engine);
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
      if (directedness == Directedness::undirected) {
        edges.push_back({static_cast<NodeId>(v), static_cast<NodeId>(u), w});
      }
    }
  }
  return Graph::from_edges(nodes, std::move(edges));
}

Graph random_lt_dag(std::size_t nodes, double edge_probability, rng::Engine& engine) {
  if (nodes == 0) throw std::invalid_argument("need at least one node");
  std::vector<std::vector<NodeId>> parents(nodes);
  for (std::size_t v = 1; v < nodes; ++v) {
    for (std::size_t u = 0; u < v; ++u) {
      if (rng::uniform01(engine) < edge_probability) parents[v].push_back(static_cast<NodeId>(u));
    }
  }
  // Every non-sink node needs a path onward: give it one forward arc if it
  // has none.
  std::vector<char> has_child(nodes, 0);
  for (const auto& ps : parents) {
    for (NodeId u : ps) has_child[u] = 1;
  }
  std::uniform_int_distribution<std::size_t> any;
  for (std::size_t u = 0; u + 1 < nodes; ++u) {
    if (has_child[u]) continue;
    const std::size_t span = nodes - 1 - u;
    const std::size_t v = u + 1 + any(engine) % span;
    parents[v].push_back(static_cast<NodeId>(u));
  }
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < nodes; ++v) {
    // Weights: random split of a random total in (0, 1].
    std::vector<double> raw(parents[v].size());
    double sum = 0.0;
    for (double& r : raw) {
      r = 0.05 + rng::uniform01(engine);
      sum += r;
    }
    const double total = 1.0 - rng::uniform01(engine) * 0.5;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      edges.push_back({parents[v][i], static_cast<NodeId>(v), raw[i] / sum * total});
    }
  }
  return Graph::from_edges(nodes, std::move(edges));
}

}  // namespace shapim
