#include "shapim/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "shapim/baselines.hpp"
#include "shapim/error.hpp"
#include "shapim/ldag_games.hpp"
#include "shapim/shapley.hpp"

namespace shapim {

namespace {

struct AlgorithmName {
  Algorithm algorithm;
  std::string_view name;
};

constexpr AlgorithmName kAlgorithmNames[] = {
    {Algorithm::dsv, "dsv"},
    {Algorithm::sv_fringe, "sv-fringe"},
    {Algorithm::sv_surrounding, "sv-surrounding"},
    {Algorithm::sv_ldag, "sv-ldag"},
    {Algorithm::bi_ldag, "bi-ldag"},
    {Algorithm::greedy_ldag, "greedy-ldag"},
    {Algorithm::celf, "celf"},
    {Algorithm::degree_discount, "degree-discount"},
};

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& entry : kAlgorithmNames) {
    if (entry.name == name) return entry.algorithm;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm algorithm) {
  for (const auto& entry : kAlgorithmNames) {
    if (entry.algorithm == algorithm) return entry.name;
  }
  return "?";
}

bool requires_lt_weights(Algorithm algorithm) {
  return algorithm == Algorithm::sv_ldag || algorithm == Algorithm::bi_ldag ||
         algorithm == Algorithm::greedy_ldag;
}

SeedSet select_seeds(const Graph& g, Algorithm algorithm, std::size_t k,
                     const SelectionParams& params) {
  if (requires_lt_weights(algorithm) && !g.satisfies_lt_invariant()) {
    throw ConfigError(std::string(to_string(algorithm)) +
                      " needs LT weights (incoming sums <= 1); use weighted-cascade "
                      "or lt-uniform");
  }
  switch (algorithm) {
    case Algorithm::dsv: {
      DsvOptions options;
      options.unguarded_discount = params.unguarded_dsv;
      return dsv_select(g, k, options);
    }
    case Algorithm::sv_fringe:
    case Algorithm::sv_surrounding: {
      if (k < 1 || k > g.node_count()) {
        throw std::invalid_argument("k must lie in [1, node_count]");
      }
      // The two closed forms differ by a constant, so they rank alike.
      const ScoreTable scores = algorithm == Algorithm::sv_fringe ? fringe_shapley(g)
                                                                  : surrounding_shapley(g);
      return top_k(scores, k);
    }
    case Algorithm::sv_ldag:
    case Algorithm::bi_ldag: {
      LdagIndexOptions options;
      options.theta = params.theta;
      options.kind = algorithm == Algorithm::sv_ldag ? IndexKind::shapley : IndexKind::banzhaf;
      options.budget = algorithm == Algorithm::sv_ldag ? params.permutations : params.samples;
      options.seed = params.seed;
      options.threads = params.threads;
      return ldag_index_select(g, k, options);
    }
    case Algorithm::greedy_ldag: {
      GreedyLdagOptions options;
      options.threads = params.threads;
      return greedy_ldag_select(g, k, params.theta, options);
    }
    case Algorithm::celf:
      return lazy_greedy_select(g, params.model, k, params.celf_runs, params.seed,
                                params.threads);
    case Algorithm::degree_discount:
      return degree_discount_select(g, params.degree_discount_p, k);
  }
  throw ConfigError("unhandled algorithm");
}

KPercentRange parse_k_percent(std::string_view text) {
  KPercentRange range;
  double* fields[] = {&range.from, &range.to, &range.step};
  std::size_t start = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t stop = i < 2 ? text.find(':', start) : text.size();
    if (stop == std::string_view::npos) {
      throw ConfigError("k-percent must look like FROM:TO:STEP, got '" + std::string(text) + "'");
    }
    const std::string_view part = text.substr(start, stop - start);
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), *fields[i]);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw ConfigError("bad number '" + std::string(part) + "' in k-percent");
    }
    start = stop + 1;
  }
  return range;
}

std::vector<std::size_t> expand_k_percent(const KPercentRange& range, std::size_t node_count) {
  if (!(range.from > 0.0 && range.to <= 100.0 && range.from <= range.to)) {
    throw ConfigError("k-percent values must lie in (0, 100] with FROM <= TO");
  }
  if (!(range.step > 0.0)) throw ConfigError("k-percent step must be positive");
  std::vector<std::size_t> ks;
  for (std::size_t i = 0;; ++i) {
    const double pct = range.from + static_cast<double>(i) * range.step;
    if (pct > range.to + 1e-9) break;
    const auto raw = std::llround(static_cast<double>(node_count) * pct / 100.0);
    const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1LL)), 1,
                                                  node_count);
    if (ks.empty() || ks.back() != k) ks.push_back(k);
  }
  return ks;
}

std::vector<std::size_t> resolve_k_values(const ExperimentConfig& config,
                                          std::size_t node_count) {
  std::vector<std::size_t> all = config.k_values;
  if (config.k_percent) {
    const auto more = expand_k_percent(*config.k_percent, node_count);
    all.insert(all.end(), more.begin(), more.end());
  }
  std::vector<std::size_t> ks;
  for (std::size_t k : all) {
    if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }
  if (ks.empty()) throw ConfigError("no k values given (use k or k-percent)");
  for (std::size_t k : ks) {
    if (k < 1 || k > node_count) {
      throw ConfigError("k=" + std::to_string(k) + " outside [1, " + std::to_string(node_count) +
                        "]");
    }
  }
  return ks;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const Graph& g) {
  if (config.algorithms.empty()) throw ConfigError("no algorithms given");
  if (config.eval_runs == 0) throw ConfigError("evaluation runs must be positive");
  const auto ks = resolve_k_values(config, g.node_count());
  const bool lt_ok = g.satisfies_lt_invariant();
  for (Algorithm a : config.algorithms) {
    if (requires_lt_weights(a) && !lt_ok) {
      throw ConfigError(std::string(to_string(a)) + " needs LT weights (incoming sums <= 1)");
    }
  }
  if (config.model == DiffusionModel::lt && !lt_ok) {
    throw ConfigError("LT evaluation needs incoming weight sums <= 1");
  }

  SelectionParams params = config.selection;
  params.seed = config.seed;

  std::vector<ResultRow> rows;
  for (Algorithm algorithm : config.algorithms) {
    for (std::size_t k : ks) {
      const auto start = std::chrono::steady_clock::now();
      const SeedSet seeds = select_seeds(g, algorithm, k, params);
      const auto stop = std::chrono::steady_clock::now();
      const SpreadEstimate spread =
          estimate_spread(g, config.model, seeds, config.eval_runs, config.seed, params.threads);
      ResultRow row;
      row.algorithm = std::string(to_string(algorithm));
      row.k = k;
      row.spread_mean = spread.mean;
      row.spread_stddev = spread.stddev;
      if (config.timing) {
        row.select_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      }
      row.eval_runs = spread.runs;
      row.rng_seed = config.seed;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  Graph g = load_edge_list(config.graph_path, config.directedness);
  if (config.scheme) g = apply_weights(g, *config.scheme);
  return run_experiment(config, g);
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.algorithm << ',' << r.k << ',' << format_double(r.spread_mean) << ','
        << format_double(r.spread_stddev) << ',';
    if (r.select_ms) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *r.select_ms);
      out << buf;
    }
    out << ',' << r.eval_runs << ',' << r.rng_seed << '\n';
  }
}

}  // namespace shapim
