#include "shapim/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "shapim/error.hpp"

namespace shapim {

DiffusionModel parse_model(std::string_view text) {
  if (text == "ic" || text == "IC") return DiffusionModel::ic;
  if (text == "lt" || text == "LT") return DiffusionModel::lt;
  throw ParseError("unknown diffusion model '" + std::string(text) + "'");
}

std::string_view to_string(DiffusionModel model) {
  return model == DiffusionModel::ic ? "ic" : "lt";
}

namespace {

void check_seeds(const Graph& g, std::span<const NodeId> seeds) {
  if (seeds.empty()) throw std::invalid_argument("seed set is empty");
  for (NodeId s : seeds) {
    if (s >= g.node_count()) {
      throw std::invalid_argument("seed id " + std::to_string(s) + " out of range");
    }
  }
}

void check_model(const Graph& g, DiffusionModel model) {
  if (model == DiffusionModel::lt && !g.satisfies_lt_invariant()) {
    throw ValidationError("LT model requires incoming weights summing to at most 1");
  }
}

// Reusable per-thread cascade state. Arrays are invalidated by bumping an
// epoch counter instead of clearing.
class Cascade {
 public:
  explicit Cascade(const Graph& g)
      : g_(g),
        active_(g.node_count(), 0),
        touched_(g.node_count(), 0),
        threshold_(g.node_count(), 0.0),
        received_(g.node_count(), 0.0) {}

  // Returns the number of active nodes; `order` holds them afterwards.
  std::size_t run(DiffusionModel model, std::span<const NodeId> seeds,
                  rng::Engine& engine) {
    if (++epoch_ == 0) {
      std::fill(active_.begin(), active_.end(), 0);
      std::fill(touched_.begin(), touched_.end(), 0);
      epoch_ = 1;
    }
    order_.clear();
    for (NodeId s : seeds) {
      if (active_[s] != epoch_) {
        active_[s] = epoch_;
        order_.push_back(s);
      }
    }
    // order_ doubles as the BFS queue.
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const NodeId u = order_[head];
      const auto targets = g_.out_neighbors(u);
      const auto weights = g_.out_weights(u);
      for (std::size_t j = 0; j < targets.size(); ++j) {
        const NodeId v = targets[j];
        if (active_[v] == epoch_) continue;
        bool fire = false;
        if (model == DiffusionModel::ic) {
          fire = rng::uniform01(engine) < weights[j];
        } else {
          if (touched_[v] != epoch_) {
            touched_[v] = epoch_;
            threshold_[v] = 1.0 - rng::uniform01(engine);  // (0, 1]
            received_[v] = 0.0;
          }
          received_[v] += weights[j];
          fire = received_[v] >= threshold_[v];
        }
        if (fire) {
          active_[v] = epoch_;
          order_.push_back(v);
        }
      }
    }
    return order_.size();
  }

  const std::vector<NodeId>& order() const { return order_; }

 private:
  const Graph& g_;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> active_;
  std::vector<std::uint32_t> touched_;
  std::vector<double> threshold_;
  std::vector<double> received_;
  std::vector<NodeId> order_;
};

}  // namespace

std::vector<NodeId> simulate_once(const Graph& g, DiffusionModel model,
                                  std::span<const NodeId> seeds, rng::Engine& engine) {
  check_seeds(g, seeds);
  check_model(g, model);
  Cascade cascade(g);
  cascade.run(model, seeds, engine);
  return cascade.order();
}

SpreadEstimate estimate_spread(const Graph& g, DiffusionModel model,
                               std::span<const NodeId> seeds, std::size_t runs,
                               std::uint64_t base_seed, int threads) {
  if (runs == 0) throw std::invalid_argument("runs must be positive");
  check_seeds(g, seeds);
  check_model(g, model);

  std::vector<double> counts(runs);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
  {
    Cascade cascade(g);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(runs); ++i) {
      auto engine = rng::stream(base_seed, rng::Purpose::spread_run,
                                static_cast<std::uint64_t>(i));
      counts[static_cast<std::size_t>(i)] =
          static_cast<double>(cascade.run(model, seeds, engine));
    }
  }

  // Two-pass reduction in run order.
  double sum = 0.0;
  for (double c : counts) sum += c;
  const double mean = sum / static_cast<double>(runs);
  double sq = 0.0;
  for (double c : counts) sq += (c - mean) * (c - mean);
  return {mean, std::sqrt(sq / static_cast<double>(runs)), runs};
}

std::vector<char> sample_live_edges(const Graph& g, DiffusionModel model,
                                    rng::Engine& engine) {
  const auto edges = g.edges();
  std::vector<char> live(edges.size(), 0);
  if (model == DiffusionModel::ic) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      live[i] = rng::uniform01(engine) < edges[i].weight ? 1 : 0;
    }
    return live;
  }
  check_model(g, model);
  // Arc ids grouped by target, in source order.
  std::vector<std::vector<std::size_t>> incoming(g.node_count());
  for (std::size_t i = 0; i < edges.size(); ++i) incoming[edges[i].target].push_back(i);
  for (const auto& arcs : incoming) {
    if (arcs.empty()) continue;
    double r = rng::uniform01(engine);
    for (std::size_t i : arcs) {
      if (r < edges[i].weight) {
        live[i] = 1;
        break;
      }
      r -= edges[i].weight;
    }
  }
  return live;
}

std::vector<NodeId> live_edge_reach(const Graph& g, std::span<const char> live,
                                    std::span<const NodeId> seeds) {
  check_seeds(g, seeds);
  // Out-adjacency position equals arc index in g.edges().
  std::vector<std::size_t> first(g.node_count() + 1, 0);
  for (const Edge& e : g.edges()) ++first[e.source + 1];
  for (std::size_t v = 0; v < g.node_count(); ++v) first[v + 1] += first[v];

  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> queue;
  for (NodeId s : seeds) {
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const auto targets = g.out_neighbors(u);
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (live[first[u] + j] && !seen[targets[j]]) {
        seen[targets[j]] = 1;
        queue.push_back(targets[j]);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

double exact_spread_ic(const Graph& g, std::span<const NodeId> seeds) {
  check_seeds(g, seeds);
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  if (m > kExactIcMaxEdges) {
    throw RefusalError("exact IC oracle limited to " + std::to_string(kExactIcMaxEdges) +
                       " edges, got " + std::to_string(m));
  }
  std::vector<char> live(m);
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double p = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      live[i] = static_cast<char>((mask >> i) & 1U);
      p *= live[i] ? edges[i].weight : 1.0 - edges[i].weight;
    }
    if (p == 0.0) continue;
    total += p * static_cast<double>(live_edge_reach(g, live, seeds).size());
  }
  return total;
}

double exact_spread_lt(const Graph& g, std::span<const NodeId> seeds) {
  double total = 0.0;
  for (double p : exact_activation_lt(g, seeds)) total += p;
  return total;
}

std::vector<double> exact_activation_lt(const Graph& g, std::span<const NodeId> seeds) {
  check_seeds(g, seeds);
  check_model(g, DiffusionModel::lt);
  const std::size_t n = g.node_count();
  double combos = 1.0;
  for (std::size_t v = 0; v < n; ++v) {
    combos *= static_cast<double>(g.in_degree(static_cast<NodeId>(v)) + 1);
    if (combos > static_cast<double>(kExactLtMaxSelections)) {
      throw RefusalError("exact LT oracle limited to " +
                         std::to_string(kExactLtMaxSelections) + " in-arc selections");
    }
  }

  std::vector<char> is_seed(n, 0);
  for (NodeId s : seeds) is_seed[s] = 1;

  // choice[v] in [0, indeg(v)]: index of the selected in-arc, indeg = none.
  std::vector<std::size_t> choice(n, 0);
  std::vector<int> parent(n, -1);
  std::vector<signed char> state(n);
  std::vector<double> probability(n, 0.0);
  while (true) {
    double p = 1.0;
    for (std::size_t v = 0; v < n && p > 0.0; ++v) {
      const auto vid = static_cast<NodeId>(v);
      const auto ws = g.in_weights(vid);
      if (choice[v] < ws.size()) {
        p *= ws[choice[v]];
        parent[v] = static_cast<int>(g.in_neighbors(vid)[choice[v]]);
      } else {
        double rest = 1.0;
        for (double w : ws) rest -= w;
        p *= std::max(rest, 0.0);
        parent[v] = -1;
      }
    }
    if (p > 0.0) {
      // Each node has at most one live parent: follow the chain to a seed.
      std::fill(state.begin(), state.end(), -1);
      std::vector<std::size_t> path;
      for (std::size_t v = 0; v < n; ++v) {
        path.clear();
        std::size_t x = v;
        signed char result = 0;
        while (true) {
          if (state[x] >= 0) {
            result = state[x];
            break;
          }
          if (is_seed[x]) {
            result = 1;
            break;
          }
          if (parent[x] < 0) break;
          if (state[x] == -2) break;  // cycle without seeds
          state[x] = -2;
          path.push_back(x);
          x = static_cast<std::size_t>(parent[x]);
        }
        if (state[x] < 0) state[x] = result;
        for (std::size_t y : path) state[y] = result;
        if (state[v] == 1) probability[v] += p;
      }
    }
    std::size_t v = 0;
    while (v < n && ++choice[v] > g.in_degree(static_cast<NodeId>(v))) {
      choice[v] = 0;
      ++v;
    }
    if (v == n) break;
  }
  return probability;
}

}  // namespace shapim
