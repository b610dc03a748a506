#include "shapim/shapley.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "shapim/enumeration.hpp"
#include "shapim/error.hpp"

namespace shapim {

Coalition::Coalition(std::vector<NodeId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool Coalition::contains(NodeId v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

namespace {

void check_coalition(const Graph& g, const Coalition& c) {
  if (!c.empty() && c.members().back() >= g.node_count()) {
    throw std::out_of_range("coalition member " + std::to_string(c.members().back()) +
                            " out of range");
  }
}

std::vector<double> inverse_closed_degree(const Graph& g) {
  std::vector<double> inv(g.node_count());
  for (std::size_t v = 0; v < inv.size(); ++v) {
    inv[v] = 1.0 / (1.0 + static_cast<double>(g.degree(static_cast<NodeId>(v))));
  }
  return inv;
}

}  // namespace

std::size_t surrounding_value(const Graph& g, const Coalition& c) {
  check_coalition(g, c);
  std::vector<char> hit(g.node_count(), 0);
  std::size_t count = 0;
  for (NodeId u : c.members()) {
    for (NodeId v : g.neighbors(u)) {
      if (!hit[v] && !c.contains(v)) {
        hit[v] = 1;
        ++count;
      }
    }
  }
  return count;
}

std::size_t fringe_value(const Graph& g, const Coalition& c) {
  return c.size() + surrounding_value(g, c);
}

ScoreTable fringe_shapley(const Graph& g) {
  const auto inv = inverse_closed_degree(g);
  ScoreTable scores(g.node_count());
  for (std::size_t v = 0; v < scores.size(); ++v) {
    double s = inv[v];
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) s += inv[u];
    scores[v] = s;
  }
  return scores;
}

ScoreTable surrounding_shapley(const Graph& g) {
  ScoreTable scores = fringe_shapley(g);
  for (double& s : scores) s -= 1.0;
  return scores;
}

ScoreTable brute_force_shapley(const Graph& g, const CoalitionValue& value) {
  const std::size_t n = g.node_count();
  if (n > kBruteForceShapleyMaxNodes) {
    throw RefusalError("brute-force Shapley limited to " +
                       std::to_string(kBruteForceShapleyMaxNodes) + " nodes, got " +
                       std::to_string(n));
  }
  std::vector<double> table(std::size_t{1} << n);
  std::vector<NodeId> members;
  for (std::size_t mask = 0; mask < table.size(); ++mask) {
    members.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) members.push_back(static_cast<NodeId>(i));
    }
    table[mask] = value(Coalition(members));
  }
  return shapley_by_permutations(table, n);
}

SeedSet top_k(std::span<const double> scores, std::size_t k) {
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  k = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), [&](NodeId a, NodeId b) {
                      return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
                    });
  order.resize(k);
  return order;
}

SeedSet dsv_select(const Graph& g, std::size_t k, const DsvOptions& options) {
  const std::size_t n = g.node_count();
  if (k < 1 || k > n) {
    throw std::invalid_argument("k must lie in [1, node_count]");
  }
  const auto inv = inverse_closed_degree(g);

  ScoreTable scores(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) scores[v] += inv[u];
  }
  const ScoreTable initial = scores;
  const SeedSet by_initial = top_k(initial, n);

  // Max-heap on (score, -id). Scores only decrease, so an entry is current
  // when it matches the live score; stale copies are skipped on pop.
  using Entry = std::pair<double, NodeId>;
  auto worse = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t v = 0; v < n; ++v) heap.emplace(scores[v], static_cast<NodeId>(v));

  std::vector<char> infected(n, 0);
  std::vector<char> selected(n, 0);
  std::size_t infected_count = 0;
  std::size_t fallback_cursor = 0;
  SeedSet picks;
  picks.reserve(k);
  std::vector<NodeId> newly;

  auto current = [&](const Entry& e) { return !infected[e.second] && e.first == scores[e.second]; };
  // Highest current score; entries within kScoreTieTolerance of it count as
  // tied, so rounding drift in the running sums cannot override the
  // lowest-id rule.
  std::vector<NodeId> tied;
  auto pop_best = [&]() {
    while (!current(heap.top())) heap.pop();
    const double best = heap.top().first;
    tied.clear();
    while (!heap.empty() && heap.top().first >= best - kScoreTieTolerance) {
      const Entry e = heap.top();
      heap.pop();
      if (current(e) && std::find(tied.begin(), tied.end(), e.second) == tied.end()) {
        tied.push_back(e.second);
      }
    }
    const NodeId winner = *std::min_element(tied.begin(), tied.end());
    for (NodeId v : tied) {
      if (v != winner) heap.emplace(scores[v], v);
    }
    return winner;
  };

  auto discount = [&](NodeId u) {
    for (NodeId i : g.neighbors(u)) {
      scores[i] -= inv[u];
      if (!infected[i]) heap.emplace(scores[i], i);
    }
  };

  for (std::size_t iteration = 0; iteration < k; ++iteration) {
    bool fallback = false;
    NodeId top = 0;
    if (infected_count < n) {
      top = pop_best();
      newly.clear();
      infected[top] = 1;
      ++infected_count;
      newly.push_back(top);
      for (NodeId u : g.neighbors(top)) {
        if (!infected[u]) {
          infected[u] = 1;
          ++infected_count;
          newly.push_back(u);
        }
      }
      if (options.unguarded_discount) {
        for (NodeId u : g.neighbors(top)) discount(u);
      } else {
        for (NodeId u : newly) discount(u);
      }
    } else {
      fallback = true;
      while (selected[by_initial[fallback_cursor]]) ++fallback_cursor;
      top = by_initial[fallback_cursor];
      const double best = initial[top];
      for (std::size_t j = fallback_cursor + 1;
           j < n && initial[by_initial[j]] >= best - kScoreTieTolerance; ++j) {
        if (!selected[by_initial[j]]) top = std::min(top, by_initial[j]);
      }
    }
    selected[top] = 1;
    picks.push_back(top);
    if (options.observer) {
      options.observer(DsvStep{iteration, top, fallback, scores, infected});
    }
  }
  return picks;
}

}  // namespace shapim
