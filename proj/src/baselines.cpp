#include "shapim/baselines.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include <omp.h>

#include "shapim/error.hpp"

namespace shapim {

namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) throw std::invalid_argument("k must lie in [1, node_count]");
}

// ap and d ap(root)/d ap(x) for one LDAG under the current seed set.
struct LdagState {
  std::vector<char> seeded;
  std::vector<double> ap;
  std::vector<double> coef;

  void evaluate(const Ldag& d) {
    const auto s = static_cast<std::uint32_t>(d.size());
    for (std::uint32_t p = 0; p < s; ++p) {
      if (seeded[p]) {
        ap[p] = 1.0;
        continue;
      }
      double sum = 0.0;
      for (const LocalArc& a : d.in_arcs(p)) sum += a.weight * ap[a.node];
      ap[p] = sum;
    }
    for (std::uint32_t p = s; p-- > 0;) {
      if (p == s - 1) {
        coef[p] = seeded[p] ? 0.0 : 1.0;
        continue;
      }
      if (seeded[p]) {
        coef[p] = 0.0;
        continue;
      }
      double sum = 0.0;
      for (const LocalArc& a : d.out_arcs(p)) sum += a.weight * coef[a.node];
      coef[p] = sum;
    }
  }

  double gain(std::uint32_t p) const { return (1.0 - ap[p]) * coef[p]; }
};

struct Membership {
  std::uint32_t ldag;
  std::uint32_t position;
};

}  // namespace

SeedSet greedy_ldag_select(const Graph& g, std::size_t k, double theta,
                           const GreedyLdagOptions& options) {
  check_k(k, g.node_count());
  const auto ldags = build_all_ldags(g, theta, options.threads);
  return greedy_ldag_select(ldags, g.node_count(), k, options);
}

SeedSet greedy_ldag_select(std::span<const Ldag> ldags, std::size_t node_count, std::size_t k,
                           const GreedyLdagOptions& options) {
  check_k(k, node_count);

  // memberships[v]: every (LDAG, position) holding v, in LDAG order.
  std::vector<std::size_t> offsets(node_count + 1, 0);
  for (const Ldag& d : ldags) {
    for (NodeId v : d.members()) ++offsets[v + 1];
  }
  for (std::size_t v = 0; v < node_count; ++v) offsets[v + 1] += offsets[v];
  std::vector<Membership> memberships(offsets.back());
  {
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < ldags.size(); ++i) {
      const auto members = ldags[i].members();
      for (std::size_t p = 0; p < members.size(); ++p) {
        memberships[cursor[members[p]]++] = {static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(p)};
      }
    }
  }

  std::vector<LdagState> states(ldags.size());
  const int nthreads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(ldags.size()); ++i) {
    const Ldag& d = ldags[static_cast<std::size_t>(i)];
    LdagState& st = states[static_cast<std::size_t>(i)];
    st.seeded.assign(d.size(), 0);
    st.ap.assign(d.size(), 0.0);
    st.coef.assign(d.size(), 0.0);
    st.evaluate(d);
  }

  auto node_gain = [&](NodeId v) {
    double sum = 0.0;
    for (std::size_t j = offsets[v]; j < offsets[v + 1]; ++j) {
      sum += states[memberships[j].ldag].gain(memberships[j].position);
    }
    return sum;
  };
  std::vector<double> gains(node_count);
  for (std::size_t v = 0; v < node_count; ++v) gains[v] = node_gain(static_cast<NodeId>(v));

  std::vector<char> selected(node_count, 0);
  std::vector<char> dirty(node_count, 0);
  std::vector<NodeId> touched;
  SeedSet picks;
  picks.reserve(k);
  for (std::size_t round = 0; round < k; ++round) {
    if (options.observer) options.observer(round, gains);
    NodeId best = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < node_count; ++v) {
      if (!selected[v] && gains[v] > best_gain) {
        best = static_cast<NodeId>(v);
        best_gain = gains[v];
      }
    }
    selected[best] = 1;
    picks.push_back(best);

    touched.clear();
    for (std::size_t j = offsets[best]; j < offsets[best + 1]; ++j) {
      const Ldag& d = ldags[memberships[j].ldag];
      LdagState& st = states[memberships[j].ldag];
      st.seeded[memberships[j].position] = 1;
      st.evaluate(d);
      for (NodeId v : d.members()) {
        if (!dirty[v]) {
          dirty[v] = 1;
          touched.push_back(v);
        }
      }
    }
    for (NodeId v : touched) {
      gains[v] = node_gain(v);
      dirty[v] = 0;
    }
  }
  return picks;
}

SeedSet greedy_select(std::size_t node_count, std::size_t k, const SpreadOracle& spread) {
  check_k(k, node_count);
  SeedSet picks;
  std::vector<char> selected(node_count, 0);
  std::vector<NodeId> trial;
  for (std::size_t round = 0; round < k; ++round) {
    NodeId best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < node_count; ++v) {
      if (selected[v]) continue;
      trial = picks;
      trial.push_back(static_cast<NodeId>(v));
      const double value = spread(trial, static_cast<NodeId>(v), round);
      if (value > best_value) {
        best = static_cast<NodeId>(v);
        best_value = value;
      }
    }
    selected[best] = 1;
    picks.push_back(best);
  }
  return picks;
}

SeedSet lazy_greedy_select(std::size_t node_count, std::size_t k, const SpreadOracle& spread,
                           int threads) {
  check_k(k, node_count);

  struct Entry {
    double gain;
    double value;  // spread of picks + node when the gain was computed
    NodeId node;
    std::size_t round;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    return a.gain != b.gain ? a.gain < b.gain : a.node > b.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);

  std::vector<double> first(node_count);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (std::int64_t v = 0; v < static_cast<std::int64_t>(node_count); ++v) {
    const NodeId seed[] = {static_cast<NodeId>(v)};
    first[static_cast<std::size_t>(v)] = spread(seed, static_cast<NodeId>(v), 0);
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    queue.push({first[v], first[v], static_cast<NodeId>(v), 0});
  }

  SeedSet picks;
  double current = 0.0;
  std::vector<NodeId> trial;
  while (picks.size() < k) {
    Entry top = queue.top();
    queue.pop();
    if (top.round == picks.size()) {
      picks.push_back(top.node);
      current = top.value;
      continue;
    }
    trial = picks;
    trial.push_back(top.node);
    const double value = spread(trial, top.node, picks.size());
    queue.push({value - current, value, top.node, picks.size()});
  }
  return picks;
}

SeedSet lazy_greedy_select(const Graph& g, DiffusionModel model, std::size_t k,
                           std::size_t runs_per_eval, std::uint64_t seed, int threads) {
  if (runs_per_eval == 0) throw std::invalid_argument("runs per evaluation must be positive");
  if (model == DiffusionModel::lt && !g.satisfies_lt_invariant()) {
    throw ValidationError("LT model requires incoming weights summing to at most 1");
  }
  const SpreadOracle spread = [&](std::span<const NodeId> seeds, NodeId candidate,
                                  std::size_t round) {
    const auto base = rng::derive(seed, rng::Purpose::lazy_greedy, candidate, round);
    return estimate_spread(g, model, seeds, runs_per_eval, base, 1).mean;
  };
  return lazy_greedy_select(g.node_count(), k, spread, threads);
}

double degree_discount_score(std::size_t degree, std::size_t selected_neighbors, double p) {
  const auto d = static_cast<double>(degree);
  const auto t = static_cast<double>(selected_neighbors);
  return d - 2.0 * t - (d - t) * t * p;
}

SeedSet degree_discount_select(const Graph& g, double p, std::size_t k) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0,1]");
  const std::size_t n = g.node_count();
  check_k(k, n);

  std::vector<std::size_t> t(n, 0);
  std::vector<double> score(n);
  std::vector<char> selected(n, 0);
  // Ordered by score descending, then id ascending.
  std::set<std::pair<double, NodeId>> ranking;
  for (std::size_t v = 0; v < n; ++v) {
    score[v] = degree_discount_score(g.degree(static_cast<NodeId>(v)), 0, p);
    ranking.emplace(-score[v], static_cast<NodeId>(v));
  }
  SeedSet picks;
  picks.reserve(k);
  while (picks.size() < k) {
    const NodeId best = ranking.begin()->second;
    ranking.erase(ranking.begin());
    selected[best] = 1;
    picks.push_back(best);
    for (NodeId u : g.neighbors(best)) {
      if (selected[u]) continue;
      ranking.erase({-score[u], u});
      ++t[u];
      score[u] = degree_discount_score(g.degree(u), t[u], p);
      ranking.emplace(-score[u], u);
    }
  }
  return picks;
}

}  // namespace shapim
