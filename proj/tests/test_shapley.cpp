#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "shapim/error.hpp"
#include "shapim/shapley.hpp"
#include "shapim/synthetic.hpp"

using namespace shapim;

namespace {

Graph undirected(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> pairs) {
  std::vector<Edge> edges;
  for (auto [u, v] : pairs) {
    edges.push_back({u, v, 1.0});
    edges.push_back({v, u, 1.0});
  }
  return Graph::from_edges(n, edges);
}

const Graph kStar = undirected(4, {{0, 1}, {0, 2}, {0, 3}});
const Graph kPath = undirected(3, {{0, 1}, {1, 2}});

double fringe_game(const Graph& g, const Coalition& c) {
  return static_cast<double>(fringe_value(g, c));
}

// Surrounding game: zero for the empty coalition, otherwise the surrounding size.
double surrounding_game(const Graph& g, const Coalition& c) {
  return c.empty() ? 0.0 : static_cast<double>(surrounding_value(g, c));
}

// Straight transcription of the selection loop for cross-checking: linear
// scans, scores recomputed from scratch as sums over uninfected neighbors.
SeedSet reference_dsv(const Graph& g, std::size_t k) {
  const std::size_t n = g.node_count();
  auto inv = [&](NodeId u) { return 1.0 / (1.0 + static_cast<double>(g.degree(u))); };
  std::vector<double> initial(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(v)) initial[v] += inv(u);
  }
  std::vector<char> infected(n, 0), chosen(n, 0);
  SeedSet a;
  while (a.size() < k) {
    const bool any_left = std::find(infected.begin(), infected.end(), 0) != infected.end();
    NodeId best = 0;
    double best_score = -1e300;
    for (NodeId v = 0; v < n; ++v) {
      if (any_left) {
        if (infected[v]) continue;
        double s = 0.0;
        for (NodeId u : g.neighbors(v)) {
          if (!infected[u]) s += inv(u);
        }
        if (s > best_score + 1e-12) {
          best = v;
          best_score = s;
        }
      } else if (!chosen[v] && initial[v] > best_score + 1e-12) {
        best = v;
        best_score = initial[v];
      }
    }
    chosen[best] = 1;
    a.push_back(best);
    if (any_left) {
      infected[best] = 1;
      for (NodeId u : g.neighbors(best)) infected[u] = 1;
    }
  }
  return a;
}

}  // namespace

TEST_CASE("surrounding value") {
  CHECK(surrounding_value(kStar, Coalition{}) == 0);
  CHECK(surrounding_value(kStar, Coalition({0})) == 3);
  CHECK(surrounding_value(kStar, Coalition({0, 1, 2, 3})) == 0);
  CHECK(surrounding_value(kStar, Coalition({1, 2})) == 1);
  CHECK(fringe_value(kStar, Coalition({1})) == 2);
  CHECK_THROWS_AS(surrounding_value(kStar, Coalition({9})), std::out_of_range);
}

TEST_CASE("fringe Shapley: closed form matches permutation enumeration") {
  const auto oracle = brute_force_shapley(
      kStar, [](const Coalition& c) { return fringe_game(kStar, c); });
  CHECK(oracle[0] == doctest::Approx(1.75));
  for (NodeId leaf : {1u, 2u, 3u}) CHECK(oracle[leaf] == doctest::Approx(0.75));

  const auto closed = fringe_shapley(kStar);
  for (NodeId v = 0; v < 4; ++v) CHECK(closed[v] == doctest::Approx(oracle[v]).epsilon(1e-12));

  const auto path = fringe_shapley(kPath);
  CHECK(path[0] == doctest::Approx(1.0 / 2 + 1.0 / 3));
  CHECK(path[1] == doctest::Approx(1.0 / 3 + 1.0 / 2 + 1.0 / 2));
  CHECK(path[2] == doctest::Approx(path[0]));
  const auto path_oracle = brute_force_shapley(
      kPath, [](const Coalition& c) { return fringe_game(kPath, c); });
  for (NodeId v = 0; v < 3; ++v) CHECK(path[v] == doctest::Approx(path_oracle[v]));

  const Graph lonely = Graph::from_edges(2, {});
  CHECK(fringe_shapley(lonely)[0] == 1.0);
}

TEST_CASE("surrounding Shapley: closed form matches permutation enumeration") {
  const auto oracle = brute_force_shapley(
      kStar, [](const Coalition& c) { return surrounding_game(kStar, c); });
  CHECK(oracle[0] == doctest::Approx(0.75));
  for (NodeId leaf : {1u, 2u, 3u}) CHECK(oracle[leaf] == doctest::Approx(-0.25));
  const auto closed = surrounding_shapley(kStar);
  for (NodeId v = 0; v < 4; ++v) CHECK(closed[v] == doctest::Approx(oracle[v]));
  CHECK(std::accumulate(closed.begin(), closed.end(), 0.0) == doctest::Approx(0.0));

  CHECK(surrounding_shapley(Graph::from_edges(1, {}))[0] == 0.0);
}

TEST_CASE("brute-force Shapley: simple games and bound") {
  const Graph edge = undirected(2, {{0, 1}});
  const auto fringe = brute_force_shapley(edge, [&](const Coalition& c) {
    return fringe_game(edge, c);
  });
  CHECK(fringe[0] == doctest::Approx(1.0));
  CHECK(fringe[1] == doctest::Approx(1.0));

  const auto zero = brute_force_shapley(kStar, [](const Coalition&) { return 0.0; });
  for (double x : zero) CHECK(x == 0.0);
  const auto count = brute_force_shapley(
      kStar, [](const Coalition& c) { return static_cast<double>(c.size()); });
  for (double x : count) CHECK(x == doctest::Approx(1.0));

  CHECK_THROWS_AS(brute_force_shapley(Graph::from_edges(10, {}),
                                      [](const Coalition&) { return 0.0; }),
                  RefusalError);
}

TEST_CASE("property: closed forms, efficiency, random small graphs") {
  auto engine = rng::stream(2024, rng::Purpose::synthetic_graph, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const auto dir = trial % 3 == 0 ? Directedness::directed : Directedness::undirected;
    const Graph g = random_graph(n, 0.4, dir, engine);
    const auto fringe = fringe_shapley(g);
    const auto surround = surrounding_shapley(g);
    const auto f_oracle =
        brute_force_shapley(g, [&](const Coalition& c) { return fringe_game(g, c); });
    const auto s_oracle =
        brute_force_shapley(g, [&](const Coalition& c) { return surrounding_game(g, c); });
    for (NodeId v = 0; v < n; ++v) {
      CHECK(std::abs(fringe[v] - f_oracle[v]) < 1e-9);
      CHECK(std::abs(surround[v] - s_oracle[v]) < 1e-9);
    }
    CHECK(std::abs(std::accumulate(fringe.begin(), fringe.end(), 0.0) - n) < 1e-9);
    CHECK(std::abs(std::accumulate(surround.begin(), surround.end(), 0.0)) < 1e-9);
  }
}

TEST_CASE("dsv: hand-executed traces") {
  // Path 1-2-3 (ids 0-1-2): initial scores 1/3, 1, 1/3.
  CHECK(dsv_select(kPath, 1) == SeedSet{1});
  CHECK(dsv_select(kPath, 2) == SeedSet{1, 0});
  CHECK(dsv_select(kPath, 3) == SeedSet{1, 0, 2});

  // Star: the center infects everything, then leaves by initial score.
  CHECK(dsv_select(kStar, 1) == SeedSet{0});
  CHECK(dsv_select(kStar, 4) == SeedSet{0, 1, 2, 3});

  // Path 0-...-6: scores 1/3, 5/6, 2/3, 2/3, 2/3, 5/6, 1/3. Picking 1 infects
  // {0,1,2} and drops node 3 to 1/3, so 5 wins next, then 3 is the last
  // uninfected node, then the fallback takes 2 by initial score.
  const Graph path7 = undirected(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}});
  std::vector<bool> fallback;
  DsvOptions options;
  options.observer = [&](const DsvStep& s) { fallback.push_back(s.fallback); };
  CHECK(dsv_select(path7, 4, options) == SeedSet{1, 5, 3, 2});
  CHECK(fallback == std::vector<bool>{false, false, false, true});

  CHECK_THROWS_AS(dsv_select(kPath, 0), std::invalid_argument);
  CHECK_THROWS_AS(dsv_select(kPath, 4), std::invalid_argument);
}

TEST_CASE("dsv: maintained-sum invariant and reference agreement") {
  auto engine = rng::stream(31, rng::Purpose::synthetic_graph, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + trial % 30;
    const Graph g = random_graph(n, 3.0 / static_cast<double>(n), Directedness::undirected, engine);
    bool invariant = true;
    DsvOptions options;
    options.observer = [&](const DsvStep& step) {
      if (step.fallback) return;
      for (NodeId i = 0; i < n; ++i) {
        double expect = 0.0;
        for (NodeId u : g.neighbors(i)) {
          if (!step.infected[u]) expect += 1.0 / (1.0 + static_cast<double>(g.degree(u)));
        }
        invariant &= std::abs(step.scores[i] - expect) < 1e-9;
      }
    };
    const SeedSet picks = dsv_select(g, n, options);
    CHECK(invariant);
    CHECK(picks.size() == n);
    SeedSet all = picks;
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    const std::size_t k = 1 + trial % n;
    CHECK(dsv_select(g, k) == reference_dsv(g, k));
  }
}

TEST_CASE("dsv: depends only on the undirected projection") {
  auto engine = rng::stream(8, rng::Purpose::synthetic_graph, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph directed = random_graph(12, 0.2, Directedness::directed, engine);
    std::vector<Edge> sym;
    for (NodeId u = 0; u < directed.node_count(); ++u) {
      for (NodeId v : directed.neighbors(u)) sym.push_back({u, v, 0.5});
    }
    const Graph projected = Graph::from_edges(directed.node_count(), sym);
    CHECK(dsv_select(directed, 5) == dsv_select(projected, 5));

    // Order-preserving relabeling through the file format.
    std::ostringstream text;
    for (const Edge& e : directed.edges()) text << 3 * e.source + 7 << ' ' << 3 * e.target + 7 << '\n';
    std::istringstream in(text.str());
    const Graph relabeled = read_edge_list(in, Directedness::directed);
    if (relabeled.node_count() != directed.node_count()) continue;  // isolated nodes dropped
    const SeedSet a = dsv_select(directed, 5);
    const SeedSet b = dsv_select(relabeled, 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(relabeled.label(b[i]) == std::to_string(3 * a[i] + 7));
    }
  }
}

TEST_CASE("dsv: unguarded discount double-counts re-encountered nodes") {
  // 0-1-2-3-4 plus 2-5 and 5-6: after picking 1, node 2 is infected; picking 3
  // next re-visits 2 under the literal rule.
  const Graph g = undirected(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}, {5, 6}});
  std::vector<double> guarded_last, unguarded_last;
  DsvOptions guarded;
  guarded.observer = [&](const DsvStep& s) { guarded_last.assign(s.scores.begin(), s.scores.end()); };
  DsvOptions unguarded = guarded;
  unguarded.unguarded_discount = true;
  unguarded.observer = [&](const DsvStep& s) {
    unguarded_last.assign(s.scores.begin(), s.scores.end());
  };
  dsv_select(g, 2, guarded);
  dsv_select(g, 2, unguarded);
  CHECK(guarded_last != unguarded_last);
}

TEST_CASE("top_k breaks ties by lowest id") {
  const std::vector<double> s{0.5, 0.9, 0.9, 0.1};
  CHECK(top_k(s, 3) == SeedSet{1, 2, 0});
  CHECK(top_k(s, 10).size() == 4);
}
