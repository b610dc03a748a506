#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "shapim/diffusion.hpp"
#include "shapim/error.hpp"
#include "shapim/synthetic.hpp"

using namespace shapim;

namespace {

const Graph kPath = Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
const Graph kHalfArc = Graph::from_edges(2, {{0, 1, 0.5}});

std::vector<NodeId> sorted(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("simulate_once: certain and impossible propagation") {
  const NodeId seeds[] = {0};
  for (auto model : {DiffusionModel::ic, DiffusionModel::lt}) {
    auto engine = rng::stream(1, rng::Purpose::spread_run, 0);
    CHECK(sorted(simulate_once(kPath, model, seeds, engine)) == std::vector<NodeId>{0, 1, 2});
  }
  const Graph zero = Graph::from_edges(4, {{0, 1, 0.0}, {1, 2, 0.0}, {0, 3, 0.0}, {3, 2, 0.0}});
  const NodeId s2[] = {0, 3};
  for (auto model : {DiffusionModel::ic, DiffusionModel::lt}) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      auto engine = rng::stream(5, rng::Purpose::spread_run, i);
      CHECK(sorted(simulate_once(zero, model, s2, engine)) == std::vector<NodeId>{0, 3});
    }
  }
}

TEST_CASE("simulate_once: half-probability arc fires about half the time") {
  const NodeId seeds[] = {0};
  const int trials = 20000;
  int fired = 0;
  for (int i = 0; i < trials; ++i) {
    auto engine = rng::stream(9, rng::Purpose::spread_run, static_cast<std::uint64_t>(i));
    const auto active = simulate_once(kHalfArc, DiffusionModel::ic, seeds, engine);
    CHECK((active.size() == 1 || active.size() == 2));
    fired += active.size() == 2 ? 1 : 0;
  }
  // Two outcomes, each with probability 1/2.
  const double se = 0.5 / std::sqrt(static_cast<double>(trials));
  CHECK(std::abs(fired / static_cast<double>(trials) - 0.5) < 4 * se);
}

TEST_CASE("simulate_once: argument errors") {
  auto engine = rng::stream(1, rng::Purpose::spread_run, 0);
  CHECK_THROWS_AS(simulate_once(kPath, DiffusionModel::ic, {}, engine), std::invalid_argument);
  const NodeId bad[] = {7};
  CHECK_THROWS_AS(simulate_once(kPath, DiffusionModel::ic, bad, engine), std::invalid_argument);
  const Graph heavy = Graph::from_edges(3, {{0, 2, 0.8}, {1, 2, 0.8}});
  const NodeId seeds[] = {0};
  CHECK_THROWS_AS(simulate_once(heavy, DiffusionModel::lt, seeds, engine), ValidationError);
  CHECK_NOTHROW(simulate_once(heavy, DiffusionModel::ic, seeds, engine));
}

TEST_CASE("estimate_spread examples") {
  const NodeId seeds[] = {0};
  const auto path = estimate_spread(kPath, DiffusionModel::ic, seeds, 100, 3);
  CHECK(path.mean == 3.0);
  CHECK(path.stddev == 0.0);
  CHECK(path.runs == 100);

  const std::size_t runs = 100000;
  const auto half = estimate_spread(kHalfArc, DiffusionModel::ic, seeds, runs, 4);
  CHECK(std::abs(half.mean - 1.5) <= 3 * 0.5 / std::sqrt(static_cast<double>(runs)));
  CHECK(half.stddev == doctest::Approx(0.5).epsilon(0.01));

  const NodeId all[] = {0, 1, 2};
  for (auto model : {DiffusionModel::ic, DiffusionModel::lt}) {
    const auto full = estimate_spread(kHalfArc, model, std::span(all, 2), 50, 1);
    CHECK(full.mean == 2.0);
    CHECK(estimate_spread(kPath, model, all, 50, 1).mean == 3.0);
  }
  CHECK_THROWS_AS(estimate_spread(kPath, DiffusionModel::ic, seeds, 0, 1), std::invalid_argument);
}

TEST_CASE("estimate_spread is deterministic and thread-count independent") {
  PowerLawGraphOptions opts;
  opts.nodes = 300;
  opts.seed = 3;
  const Graph g = apply_weights(power_law_out_degree_graph(opts), WeightScheme::weighted_cascade());
  const NodeId seeds[] = {0, 5, 17};
  for (auto model : {DiffusionModel::ic, DiffusionModel::lt}) {
    const auto a = estimate_spread(g, model, seeds, 2000, 42, 1);
    const auto b = estimate_spread(g, model, seeds, 2000, 42, 1);
    const auto c = estimate_spread(g, model, seeds, 2000, 42, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.stddev == b.stddev);
    CHECK(a.mean == c.mean);
    CHECK(a.stddev == c.stddev);
    CHECK(a.mean >= 3.0);
    CHECK(a.mean <= 300.0);
  }
}

TEST_CASE("exact IC oracle") {
  const NodeId seeds[] = {0};
  CHECK(exact_spread_ic(kHalfArc, seeds) == doctest::Approx(1.5));
  CHECK(exact_spread_ic(kPath, seeds) == doctest::Approx(3.0));
  const Graph fork = Graph::from_edges(3, {{0, 1, 0.5}, {0, 2, 0.5}});
  CHECK(exact_spread_ic(fork, seeds) == doctest::Approx(2.0));

  std::vector<Edge> many;
  for (NodeId v = 1; v <= 21; ++v) many.push_back({0, v, 0.5});
  const Graph big = Graph::from_edges(22, many);
  CHECK_THROWS_AS(exact_spread_ic(big, seeds), RefusalError);
}

TEST_CASE("exact LT oracle") {
  const NodeId seeds[] = {0};
  const Graph arc = Graph::from_edges(2, {{0, 1, 0.8}});
  CHECK(exact_spread_lt(arc, seeds) == doctest::Approx(1.8));

  const Graph zero = Graph::from_edges(3, {{0, 1, 0.0}, {1, 2, 0.0}});
  const NodeId two[] = {0, 2};
  CHECK(exact_spread_lt(zero, two) == doctest::Approx(2.0));

  const Graph chain = Graph::from_edges(3, {{0, 1, 0.5}, {1, 2, 0.5}});
  CHECK(exact_spread_lt(chain, seeds) == doctest::Approx(1.75));
  const auto per_node = exact_activation_lt(chain, seeds);
  CHECK(per_node[2] == doctest::Approx(0.25));

  // A 2-cycle: 0 <-> 1 with 2 feeding 0. Seeding 2 reaches 0 w.p. 0.5 and 1
  // through 0 w.p. 0.5 * 0.6; the cycle itself adds nothing.
  const Graph cyc = Graph::from_edges(3, {{0, 1, 0.6}, {1, 0, 0.4}, {2, 0, 0.5}});
  const NodeId s2[] = {2};
  CHECK(exact_spread_lt(cyc, s2) == doctest::Approx(1.0 + 0.5 + 0.3));

  std::vector<Edge> dense;
  for (NodeId u = 0; u < 8; ++u) {
    for (NodeId v = 0; v < 8; ++v) {
      if (u != v) dense.push_back({u, v, 1.0 / 8.0});
    }
  }
  CHECK_THROWS_AS(exact_spread_lt(Graph::from_edges(8, dense), seeds), RefusalError);
}

TEST_CASE("property: live-edge reach is monotone in the seed set") {
  auto engine = rng::stream(77, rng::Purpose::synthetic_graph, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = random_graph(9, 0.3, Directedness::directed, engine);
    const auto live = sample_live_edges(g, DiffusionModel::ic, engine);
    const NodeId small[] = {static_cast<NodeId>(trial % 9)};
    const NodeId large[] = {static_cast<NodeId>(trial % 9), static_cast<NodeId>((trial + 4) % 9)};
    const auto a = live_edge_reach(g, live, small);
    const auto b = live_edge_reach(g, live, large);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST_CASE("Monte Carlo agrees with the exact oracles on small instances") {
  auto engine = rng::stream(101, rng::Purpose::synthetic_graph, 2);
  for (int trial = 0; trial < 4; ++trial) {
    const Graph raw = random_graph(6, 0.35, Directedness::directed, engine);
    if (raw.arc_count() == 0 || raw.arc_count() > kExactIcMaxEdges) continue;
    const NodeId seeds[] = {0};
    const std::size_t runs = 20000;
    const auto ic = estimate_spread(raw, DiffusionModel::ic, seeds, runs, 8);
    const double ic_exact = exact_spread_ic(raw, seeds);
    CHECK(std::abs(ic.mean - ic_exact) <= 4 * std::max(ic.stddev, 1e-12) / std::sqrt(runs) + 1e-12);

    const Graph lt = apply_weights(raw, WeightScheme::lt_uniform());
    const auto lte = estimate_spread(lt, DiffusionModel::lt, seeds, runs, 8);
    const double lt_exact = exact_spread_lt(lt, seeds);
    CHECK(std::abs(lte.mean - lt_exact) <=
          4 * std::max(lte.stddev, 1e-12) / std::sqrt(runs) + 1e-12);
  }
}
