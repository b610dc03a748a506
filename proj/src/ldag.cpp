#include "shapim/ldag.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <omp.h>

#include "shapim/error.hpp"

namespace shapim {

std::optional<std::uint32_t> Ldag::position(NodeId v) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), std::make_pair(v, std::uint32_t{0}));
  if (it == index_.end() || it->first != v) return std::nullopt;
  return it->second;
}

Ldag Ldag::assemble(std::vector<NodeId> order, const Graph& g, double theta,
                    std::size_t dropped, std::vector<double> influence) {
  Ldag d;
  d.theta_ = theta;
  d.members_ = std::move(order);
  d.dropped_arcs_ = dropped;
  const std::size_t s = d.members_.size();
  d.index_.reserve(s);
  for (std::size_t p = 0; p < s; ++p) {
    d.index_.emplace_back(d.members_[p], static_cast<std::uint32_t>(p));
  }
  std::sort(d.index_.begin(), d.index_.end());

  // Keep every graph arc between members that points forward in the order.
  d.in_offsets_.assign(s + 1, 0);
  d.out_offsets_.assign(s + 1, 0);
  std::vector<std::vector<LocalArc>> ins(s);
  for (std::size_t p = 0; p < s; ++p) {
    const NodeId v = d.members_[p];
    const auto sources = g.in_neighbors(v);
    const auto weights = g.in_weights(v);
    for (std::size_t j = 0; j < sources.size(); ++j) {
      const auto q = d.position(sources[j]);
      if (q && *q < p) ins[p].push_back({*q, weights[j]});
    }
  }
  for (std::size_t p = 0; p < s; ++p) {
    d.in_offsets_[p + 1] = d.in_offsets_[p] + ins[p].size();
    d.in_sources_.insert(d.in_sources_.end(), ins[p].begin(), ins[p].end());
    for (const LocalArc& a : ins[p]) ++d.out_offsets_[a.node + 1];
  }
  for (std::size_t p = 0; p < s; ++p) d.out_offsets_[p + 1] += d.out_offsets_[p];
  d.out_targets_.resize(d.in_sources_.size());
  std::vector<std::size_t> cursor(d.out_offsets_.begin(), d.out_offsets_.end() - 1);
  for (std::size_t p = 0; p < s; ++p) {
    for (const LocalArc& a : ins[p]) {
      d.out_targets_[cursor[a.node]++] = {static_cast<std::uint32_t>(p), a.weight};
    }
  }

  if (!influence.empty()) {
    d.influence_ = std::move(influence);
    return d;
  }
  // Influence on the root: reverse sweep over out-arcs.
  d.influence_.assign(s, 0.0);
  d.influence_[s - 1] = 1.0;
  for (std::size_t p = s - 1; p-- > 0;) {
    double inf = 0.0;
    for (const LocalArc& a : d.out_arcs(static_cast<std::uint32_t>(p))) {
      inf += a.weight * d.influence_[a.node];
    }
    d.influence_[p] = inf;
  }
  return d;
}

Ldag Ldag::from_dag(const Graph& g, NodeId root) {
  if (root >= g.node_count()) throw std::invalid_argument("root out of range");
  // Ancestors of root, then Kahn's algorithm restricted to them.
  std::vector<char> in_set(g.node_count(), 0);
  std::vector<NodeId> stack{root};
  in_set[root] = 1;
  std::vector<NodeId> ancestors;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    ancestors.push_back(v);
    for (NodeId u : g.in_neighbors(v)) {
      if (!in_set[u]) {
        in_set[u] = 1;
        stack.push_back(u);
      }
    }
  }
  std::sort(ancestors.begin(), ancestors.end());
  std::unordered_map<NodeId, std::size_t> pending;
  for (NodeId v : ancestors) {
    std::size_t c = 0;
    for (NodeId u : g.in_neighbors(v)) c += in_set[u] ? 1 : 0;
    pending[v] = c;
  }
  std::vector<NodeId> order;
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v : ancestors) {
    if (pending[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    const NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (NodeId w : g.out_neighbors(v)) {
      if (in_set[w] && --pending[w] == 0) ready.push(w);
    }
  }
  if (order.size() != ancestors.size() || order.back() != root) {
    throw ValidationError("ancestor subgraph of root is not a DAG ending at root");
  }
  Ldag d = assemble(std::move(order), g, 1.0, 0);
  d.theta_ = *std::min_element(d.influence_.begin(), d.influence_.end());
  return d;
}

Ldag build_ldag(const Graph& g, NodeId root, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must lie in (0,1]");
  }
  if (root >= g.node_count()) throw std::invalid_argument("root out of range");

  std::unordered_map<NodeId, double> candidate;
  std::unordered_map<NodeId, std::size_t> admitted;  // node -> admission index
  std::vector<NodeId> admission;
  std::vector<double> admitted_influence;

  using Entry = std::pair<double, NodeId>;
  auto worse = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);

  auto admit = [&](NodeId x, double inf) {
    admitted.emplace(x, admission.size());
    admission.push_back(x);
    admitted_influence.push_back(inf);
    candidate.erase(x);
    const auto sources = g.in_neighbors(x);
    const auto weights = g.in_weights(x);
    for (std::size_t j = 0; j < sources.size(); ++j) {
      const NodeId y = sources[j];
      if (admitted.contains(y)) continue;
      double& c = candidate[y];
      c += weights[j] * inf;
      heap.emplace(c, y);
    }
  };

  admit(root, 1.0);
  while (!heap.empty()) {
    const auto [value, x] = heap.top();
    heap.pop();
    if (admitted.contains(x)) continue;
    if (value != candidate[x]) continue;  // superseded by a larger entry
    if (value < theta) break;
    admit(x, value);
  }

  // Arcs from an earlier-admitted node to a later one would close a cycle.
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < admission.size(); ++i) {
    for (NodeId w : g.out_neighbors(admission[i])) {
      auto it = admitted.find(w);
      if (it != admitted.end() && it->second > i) ++dropped;
    }
  }
  std::reverse(admission.begin(), admission.end());
  std::reverse(admitted_influence.begin(), admitted_influence.end());
  return Ldag::assemble(std::move(admission), g, theta, dropped,
                        std::move(admitted_influence));
}

std::vector<Ldag> build_all_ldags(const Graph& g, double theta, int threads) {
  if (!g.satisfies_lt_invariant()) {
    throw ValidationError("LDAG construction requires LT weights (incoming sums <= 1)");
  }
  std::vector<Ldag> ldags(g.node_count());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
  for (std::int64_t v = 0; v < static_cast<std::int64_t>(g.node_count()); ++v) {
    ldags[static_cast<std::size_t>(v)] = build_ldag(g, static_cast<NodeId>(v), theta);
  }
  return ldags;
}

double activation_probability_local(const Ldag& d, std::span<const char> seeded) {
  if (seeded.size() != d.size()) {
    throw std::invalid_argument("seed flags must cover every LDAG member");
  }
  std::vector<double> ap(d.size(), 0.0);
  for (std::uint32_t p = 0; p < d.size(); ++p) {
    if (seeded[p]) {
      ap[p] = 1.0;
      continue;
    }
    double sum = 0.0;
    for (const LocalArc& a : d.in_arcs(p)) sum += a.weight * ap[a.node];
    ap[p] = sum;
  }
  return ap.back();
}

double activation_probability(const Ldag& d, std::span<const NodeId> coalition) {
  std::vector<char> seeded(d.size(), 0);
  for (NodeId v : coalition) {
    const auto p = d.position(v);
    if (!p) {
      throw std::invalid_argument("node " + std::to_string(v) + " is not in the LDAG of " +
                                  std::to_string(d.root()));
    }
    seeded[*p] = 1;
  }
  return activation_probability_local(d, seeded);
}

void write_ldag(std::ostream& out, const Ldag& d, const Graph& g) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d.theta());
  out << "# root=" << g.label(d.root()) << " theta="
      << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  const auto members = d.members();
  for (std::uint32_t p = 0; p < d.size(); ++p) {
    for (const LocalArc& a : d.out_arcs(p)) {
      auto [wend, wec] = std::to_chars(buf, buf + sizeof buf, a.weight);
      out << g.label(members[p]) << ' ' << g.label(members[a.node]) << ' '
          << std::string_view(buf, static_cast<std::size_t>(wend - buf)) << '\n';
    }
  }
}

}  // namespace shapim
