#include <doctest.h>

#include <cmath>
#include <sstream>

#include "shapim/diffusion.hpp"
#include "shapim/error.hpp"
#include "shapim/ldag.hpp"
#include "shapim/synthetic.hpp"

using namespace shapim;

namespace {

// v=0, x=1, y=2, z=3: x->v 0.5, y->x 0.5, z->v 0.2.
const Graph kExample = Graph::from_edges(4, {{1, 0, 0.5}, {2, 1, 0.5}, {3, 0, 0.2}});

void check_structure(const Ldag& d) {
  REQUIRE(d.size() >= 1);
  CHECK(d.influence().back() == 1.0);
  for (std::uint32_t p = 0; p < d.size(); ++p) {
    for (const LocalArc& a : d.in_arcs(p)) CHECK(a.node < p);
    for (const LocalArc& a : d.out_arcs(p)) CHECK(a.node > p);
    if (p + 1 < d.size()) CHECK(d.out_arcs(p).size() > 0);  // reaches the root
    CHECK(d.position(d.members()[p]) == p);
  }
}

}  // namespace

TEST_CASE("build_ldag: hand-executed greedy example") {
  const Ldag d = build_ldag(kExample, 0, 0.25);
  REQUIRE(d.size() == 3);
  CHECK(d.root() == 0);
  // Admission order v, x, y; topological order is its reverse.
  CHECK(std::vector<NodeId>(d.members().begin(), d.members().end()) ==
        std::vector<NodeId>{2, 1, 0});
  CHECK(d.influence()[0] == 0.25);
  CHECK(d.influence()[1] == 0.5);
  CHECK_FALSE(d.position(3).has_value());
  CHECK(d.arc_count() == 2);
  check_structure(d);
}

TEST_CASE("build_ldag: degenerate cases and errors") {
  const Ldag tight = build_ldag(kExample, 0, 1.0);
  CHECK(tight.size() == 1);
  const Ldag lonely = build_ldag(kExample, 3, 0.01);
  CHECK(lonely.size() == 1);
  CHECK(lonely.root() == 3);
  CHECK_THROWS_AS(build_ldag(kExample, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_ldag(kExample, 0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(build_ldag(kExample, 9, 0.5), std::invalid_argument);
}

TEST_CASE("build_ldag: cycles are broken by admission order") {
  // 1 <-> 2 both feeding root 0.
  const Graph g = Graph::from_edges(3, {{1, 0, 0.6}, {2, 0, 0.4}, {1, 2, 0.5}, {2, 1, 0.4}});
  const Ldag d = build_ldag(g, 0, 0.01);
  CHECK(d.size() == 3);
  CHECK(d.dropped_arcs() == 1);
  check_structure(d);
  // 1 enters first (0.6); 2 then sees 0.4 + 0.4 * 0.6 = 0.64.
  CHECK(d.influence()[*d.position(2)] == doctest::Approx(0.64));
}

TEST_CASE("activation probability examples") {
  const Graph chain = Graph::from_edges(3, {{2, 1, 0.5}, {1, 0, 0.5}});
  const Ldag d = build_ldag(chain, 0, 0.1);
  const NodeId y[] = {2};
  const NodeId root[] = {0};
  CHECK(activation_probability(d, y) == doctest::Approx(0.25));
  CHECK(activation_probability(d, root) == 1.0);
  CHECK(activation_probability(d, {}) == 0.0);
  const NodeId outsider[] = {2};
  const Ldag small = build_ldag(chain, 0, 0.3);
  CHECK_THROWS_AS(activation_probability(small, outsider), std::invalid_argument);
}

TEST_CASE("property: monotone DP, stored influence, structure") {
  PowerLawGraphOptions opts;
  opts.nodes = 150;
  opts.seed = 5;
  const Graph g = apply_weights(power_law_out_degree_graph(opts), WeightScheme::weighted_cascade());
  auto engine = rng::stream(17, rng::Purpose::synthetic_graph, 0);
  const auto ldags = build_all_ldags(g, 0.02);
  for (const Ldag& d : ldags) {
    check_structure(d);
    std::vector<char> seeded(d.size(), 0);
    for (std::uint32_t p = 0; p < d.size(); ++p) {
      CHECK(d.influence()[p] >= d.theta());
      seeded[p] = 1;
      CHECK(std::abs(activation_probability_local(d, seeded) - d.influence()[p]) < 1e-9);
      seeded[p] = 0;
    }
    // Random chain of growing coalitions.
    double last = 0.0;
    for (int step = 0; step < 6; ++step) {
      seeded[std::uniform_int_distribution<std::size_t>(0, d.size() - 1)(engine)] = 1;
      const double now = activation_probability_local(d, seeded);
      CHECK(now >= last - 1e-12);
      CHECK(now <= 1.0 + 1e-12);
      last = now;
    }
  }
}

TEST_CASE("property: DP equals exact LT root activation on DAGs") {
  auto engine = rng::stream(23, rng::Purpose::synthetic_graph, 0);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 15; ++trial) {
    const Graph g = random_lt_dag(7, 0.35, engine);
    const NodeId root = static_cast<NodeId>(g.node_count() - 1);
    const Ldag d = Ldag::from_dag(g, root);
    check_structure(d);
    for (std::uint32_t mask = 1; mask < 8; ++mask) {
      std::vector<NodeId> seeds;
      for (NodeId v = 0; v < 3; ++v) {
        if (mask & (1U << v)) seeds.push_back(v);
      }
      const double exact = exact_activation_lt(g, seeds)[root];
      CHECK(std::abs(activation_probability(d, seeds) - exact) < 1e-9);
    }
    ++checked;
  }
  CHECK(checked == 15);
}

TEST_CASE("from_dag rejects cycles") {
  const Graph g = Graph::from_edges(3, {{0, 1, 0.5}, {1, 0, 0.5}, {1, 2, 0.5}});
  CHECK_THROWS_AS(Ldag::from_dag(g, 2), ValidationError);
}

TEST_CASE("build_all_ldags: thread count does not change the result") {
  PowerLawGraphOptions opts;
  opts.nodes = 200;
  opts.seed = 9;
  const Graph g = apply_weights(power_law_out_degree_graph(opts), WeightScheme::weighted_cascade());
  const auto serial = build_all_ldags(g, kDefaultLdagTheta, 1);
  const auto parallel = build_all_ldags(g, kDefaultLdagTheta, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].root() == i);
    CHECK(std::equal(serial[i].members().begin(), serial[i].members().end(),
                     parallel[i].members().begin(), parallel[i].members().end()));
  }
  const Graph heavy = Graph::from_edges(3, {{0, 2, 0.8}, {1, 2, 0.8}});
  CHECK_THROWS_AS(build_all_ldags(heavy, 0.1), ValidationError);
}

TEST_CASE("write_ldag dump format") {
  const Ldag d = build_ldag(kExample, 0, 0.25);
  std::ostringstream out;
  write_ldag(out, d, kExample);
  CHECK(out.str() == "# root=0 theta=0.25\n2 1 0.5\n1 0 0.5\n");
}
