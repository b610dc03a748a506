#include "shapim/ldag_games.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include <omp.h>

#include "shapim/enumeration.hpp"
#include "shapim/error.hpp"
#include "shapim/shapley.hpp"

namespace shapim {

IndexKind parse_index_kind(std::string_view text) {
  if (text == "shapley" || text == "sv") return IndexKind::shapley;
  if (text == "banzhaf" || text == "bi") return IndexKind::banzhaf;
  throw ParseError("unknown index kind '" + std::string(text) + "'");
}

std::string_view to_string(IndexKind kind) {
  return kind == IndexKind::shapley ? "shapley" : "banzhaf";
}

namespace {

// Incremental seeding on one LDAG. Seeding a node moves its ap to 1 and the
// change is pushed forward along out-arcs, stopping at seeded nodes; only the
// affected cone is touched.
class IncrementalSeeding {
 public:
  explicit IncrementalSeeding(const Ldag& d)
      : d_(d), ap_(d.size(), 0.0), delta_(d.size(), 0.0), seeded_(d.size(), 0) {}

  void reset() {
    std::fill(ap_.begin(), ap_.end(), 0.0);
    std::fill(seeded_.begin(), seeded_.end(), 0);
  }

  double root_value() const { return ap_.back(); }
  bool seeded(std::uint32_t p) const { return seeded_[p] != 0; }

  void seed(std::uint32_t v) {
    if (seeded_[v]) return;
    seeded_[v] = 1;
    delta_[v] = 1.0 - ap_[v];
    ap_[v] = 1.0;
    push_out(v);
    while (!pending_.empty()) {
      const std::uint32_t p = pending_.top();
      pending_.pop();
      const double change = delta_[p];
      if (seeded_[p] || change == 0.0) {
        delta_[p] = 0.0;
        continue;
      }
      ap_[p] += change;
      push_out(p);
    }
  }

 private:
  void push_out(std::uint32_t p) {
    const double change = delta_[p];
    delta_[p] = 0.0;
    for (const LocalArc& a : d_.out_arcs(p)) {
      if (delta_[a.node] == 0.0) pending_.push(a.node);
      delta_[a.node] += a.weight * change;
    }
  }

  const Ldag& d_;
  std::vector<double> ap_;
  std::vector<double> delta_;
  std::vector<char> seeded_;
  // Topological positions, smallest first, so each node is settled once all
  // of its in-arcs have delivered their change.
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> pending_;
};

std::vector<double> value_table(const LdagGame& game) {
  const std::size_t n = game.players();
  std::vector<double> table(std::size_t{1} << n);
  std::vector<char> seeded(n);
  for (std::size_t mask = 0; mask < table.size(); ++mask) {
    for (std::size_t i = 0; i < n; ++i) seeded[i] = (mask >> i) & 1U;
    table[mask] = game.value(seeded);
  }
  return table;
}

std::uint32_t require_position(const Ldag& d, NodeId v) {
  const auto p = d.position(v);
  if (!p) {
    throw std::invalid_argument("node " + std::to_string(v) + " is not a player in the LDAG of " +
                                std::to_string(d.root()));
  }
  return *p;
}

// 1 - ap(target) with `seeded` ancestors; only ancestors feed the target.
double unreached_share(const Ldag& d, std::uint32_t target,
                       std::span<const std::uint32_t> ancestors,
                       std::span<const char> seeded, std::vector<double>& ap) {
  for (std::size_t i = 0; i < ancestors.size(); ++i) {
    const std::uint32_t p = ancestors[i];
    if (seeded[i]) {
      ap[p] = 1.0;
      continue;
    }
    double sum = 0.0;
    for (const LocalArc& a : d.in_arcs(p)) sum += a.weight * ap[a.node];
    ap[p] = sum;
  }
  double reach = 0.0;
  for (const LocalArc& a : d.in_arcs(target)) reach += a.weight * ap[a.node];
  return 1.0 - reach;
}

// d ap(root) / d ap(target) with `seeded` descendants held at 1.
double propagation_coefficient(const Ldag& d, std::uint32_t target,
                               std::span<const std::uint32_t> descendants,
                               std::span<const char> seeded, std::vector<double>& coef) {
  if (descendants.empty()) return 1.0;  // target is the root
  std::fill(coef.begin(), coef.end(), 0.0);
  coef[target] = 1.0;
  for (std::size_t i = 0; i < descendants.size(); ++i) {
    const std::uint32_t p = descendants[i];
    if (seeded[i]) {
      coef[p] = 0.0;
      continue;
    }
    double sum = 0.0;
    for (const LocalArc& a : d.in_arcs(p)) sum += a.weight * coef[a.node];
    coef[p] = sum;
  }
  return coef.back();
}

}  // namespace

std::vector<double> mc_shapley_ldag(const LdagGame& game, std::size_t permutations,
                                    rng::Engine& engine) {
  if (permutations == 0) throw std::invalid_argument("permutations must be positive");
  const Ldag& d = game.ldag();
  const std::size_t n = d.size();
  const auto root = static_cast<std::uint32_t>(n - 1);
  std::vector<double> total(n, 0.0);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), std::uint32_t{0});
  IncrementalSeeding state(d);

  for (std::size_t s = 0; s < permutations; ++s) {
    std::shuffle(order.begin(), order.end(), engine);
    state.reset();
    for (std::uint32_t v : order) {
      const double before = state.root_value();
      state.seed(v);
      total[v] += state.root_value() - before;
      // Past this point every marginal is zero.
      if (v == root) break;
    }
  }
  for (double& t : total) t /= static_cast<double>(permutations);
  return total;
}

std::vector<double> exact_index_ldag(const LdagGame& game, IndexKind kind) {
  const std::size_t n = game.players();
  const std::size_t limit =
      kind == IndexKind::shapley ? kExactShapleyMaxPlayers : kExactBanzhafMaxPlayers;
  if (n > limit) {
    throw RefusalError("exact " + std::string(to_string(kind)) + " limited to " +
                       std::to_string(limit) + " players, got " + std::to_string(n));
  }
  const auto table = value_table(game);
  return kind == IndexKind::shapley ? shapley_by_permutations(table, n)
                                    : banzhaf_by_subsets(table, n);
}

InfluenceCones influence_cones(const Ldag& d, std::uint32_t target) {
  InfluenceCones cones;
  std::vector<char> mark(d.size(), 0);
  std::vector<std::uint32_t> stack{target};
  while (!stack.empty()) {
    const std::uint32_t p = stack.back();
    stack.pop_back();
    for (const LocalArc& a : d.in_arcs(p)) {
      if (!mark[a.node]) {
        mark[a.node] = 1;
        cones.ancestors.push_back(a.node);
        stack.push_back(a.node);
      }
    }
  }
  stack.push_back(target);
  while (!stack.empty()) {
    const std::uint32_t p = stack.back();
    stack.pop_back();
    for (const LocalArc& a : d.out_arcs(p)) {
      if (!mark[a.node]) {
        mark[a.node] = 1;
        cones.descendants.push_back(a.node);
        stack.push_back(a.node);
      }
    }
  }
  std::sort(cones.ancestors.begin(), cones.ancestors.end());
  std::sort(cones.descendants.begin(), cones.descendants.end());
  return cones;
}

double mc_banzhaf_ldag(const LdagGame& game, NodeId target, std::size_t samples,
                       rng::Engine& engine) {
  if (samples == 0) throw std::invalid_argument("samples must be positive");
  const Ldag& d = game.ldag();
  const std::uint32_t v = require_position(d, target);
  const InfluenceCones cones = influence_cones(d, v);
  std::vector<double> scratch(d.size(), 0.0);

  double first = 1.0;
  if (!cones.ancestors.empty()) {
    std::vector<char> seeded(cones.ancestors.size());
    double sum = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      for (char& f : seeded) f = rng::coin(engine) ? 1 : 0;
      sum += unreached_share(d, v, cones.ancestors, seeded, scratch);
    }
    first = sum / static_cast<double>(samples);
  }
  double second = 1.0;
  if (!cones.descendants.empty()) {
    std::vector<char> seeded(cones.descendants.size());
    double sum = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      for (char& f : seeded) f = rng::coin(engine) ? 1 : 0;
      sum += propagation_coefficient(d, v, cones.descendants, seeded, scratch);
    }
    second = sum / static_cast<double>(samples);
  }
  return first * second;
}

double banzhaf_by_cone_enumeration(const LdagGame& game, NodeId target) {
  const Ldag& d = game.ldag();
  const std::uint32_t v = require_position(d, target);
  const InfluenceCones cones = influence_cones(d, v);
  if (cones.ancestors.size() > kExhaustiveConeMax ||
      cones.descendants.size() > kExhaustiveConeMax) {
    throw RefusalError("cone enumeration limited to " + std::to_string(kExhaustiveConeMax) +
                       " players per cone");
  }
  std::vector<double> scratch(d.size(), 0.0);

  auto average = [&](std::span<const std::uint32_t> cone, auto&& factor) {
    std::vector<char> seeded(cone.size());
    const std::uint64_t subsets = std::uint64_t{1} << cone.size();
    double sum = 0.0;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      for (std::size_t i = 0; i < cone.size(); ++i) seeded[i] = (mask >> i) & 1U;
      sum += factor(cone, seeded);
    }
    return sum / static_cast<double>(subsets);
  };
  const double first = average(cones.ancestors, [&](auto cone, const auto& seeded) {
    return unreached_share(d, v, cone, seeded, scratch);
  });
  const double second = average(cones.descendants, [&](auto cone, const auto& seeded) {
    return propagation_coefficient(d, v, cone, seeded, scratch);
  });
  return first * second;
}

ScoreTable merge_indices(std::span<const LdagScores> per_ldag, std::size_t node_count) {
  std::vector<const LdagScores*> ordered;
  ordered.reserve(per_ldag.size());
  for (const LdagScores& s : per_ldag) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(), [](const LdagScores* a, const LdagScores* b) {
    return std::tie(a->root, a->nodes, a->values) < std::tie(b->root, b->nodes, b->values);
  });
  ScoreTable merged(node_count, 0.0);
  for (const LdagScores* s : ordered) {
    if (s->nodes.size() != s->values.size()) {
      throw std::invalid_argument("LDAG score table has mismatched lengths");
    }
    for (std::size_t i = 0; i < s->nodes.size(); ++i) {
      if (s->nodes[i] >= node_count) throw std::out_of_range("score for unknown node");
      merged[s->nodes[i]] += s->values[i];
    }
  }
  return merged;
}

void write_index_csv(std::ostream& out, std::span<const LdagScores> per_ldag,
                     const Graph& g) {
  out << "root,node,index\n";
  char buf[64];
  for (const LdagScores& s : per_ldag) {
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, s.values[i]);
      out << g.label(s.root) << ',' << g.label(s.nodes[i]) << ','
          << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
    }
  }
}

std::vector<LdagScores> read_index_csv(std::istream& in, const Graph& g) {
  std::vector<LdagScores> result;
  std::string line;
  std::size_t line_no = 0;
  auto lookup = [&](const std::string& label) {
    const auto id = g.find_label(label);
    if (!id) {
      throw ParseError("line " + std::to_string(line_no) + ": unknown node '" + label + "'");
    }
    return *id;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "root,node,index") throw ParseError("missing root,node,index header");
      continue;
    }
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string root, node, value;
    if (!std::getline(fields, root, ',') || !std::getline(fields, node, ',') ||
        !std::getline(fields, value)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected root,node,index");
    }
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": bad index value");
    }
    const NodeId r = lookup(root);
    if (result.empty() || result.back().root != r) result.push_back({r, {}, {}});
    result.back().nodes.push_back(lookup(node));
    result.back().values.push_back(x);
  }
  return result;
}

std::vector<LdagScores> ldag_index_scores(std::span<const Ldag> ldags,
                                          const LdagIndexOptions& options) {
  if (options.budget == 0 && !options.exact) {
    throw std::invalid_argument("sampling budget must be positive");
  }
  std::vector<LdagScores> result(ldags.size());
  const int nthreads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(nthreads)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(ldags.size()); ++i) {
    const Ldag& d = ldags[static_cast<std::size_t>(i)];
    const LdagGame game(d);
    LdagScores& out = result[static_cast<std::size_t>(i)];
    out.root = d.root();
    out.nodes.assign(d.members().begin(), d.members().end());
    if (options.exact) {
      out.values = exact_index_ldag(game, options.kind);
    } else if (options.kind == IndexKind::shapley) {
      auto engine = rng::stream(options.seed, rng::Purpose::ldag_shapley, d.root());
      out.values = mc_shapley_ldag(game, options.budget, engine);
    } else {
      out.values.resize(d.size());
      for (std::uint32_t p = 0; p < d.size(); ++p) {
        auto engine = rng::stream(options.seed, rng::Purpose::ldag_banzhaf, d.root(), p);
        out.values[p] = mc_banzhaf_ldag(game, d.members()[p], options.budget, engine);
      }
    }
  }
  return result;
}

SeedSet ldag_index_select(const Graph& g, std::size_t k, const LdagIndexOptions& options,
                          std::vector<LdagScores>* scores_out) {
  if (k < 1 || k > g.node_count()) throw std::invalid_argument("k must lie in [1, node_count]");
  const auto ldags = build_all_ldags(g, options.theta, options.threads);
  auto scores = ldag_index_scores(ldags, options);
  const ScoreTable merged = merge_indices(scores, g.node_count());
  if (scores_out) *scores_out = std::move(scores);
  return top_k(merged, k);
}

}  // namespace shapim
