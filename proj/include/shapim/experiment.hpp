#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapim/diffusion.hpp"
#include "shapim/graph.hpp"
#include "shapim/ldag.hpp"

namespace shapim {

enum class Algorithm {
  dsv,
  sv_fringe,
  sv_surrounding,
  sv_ldag,
  bi_ldag,
  greedy_ldag,
  celf,
  degree_discount,
};

/// Names: dsv, sv-fringe, sv-surrounding, sv-ldag, bi-ldag, greedy-ldag,
/// celf, degree-discount. Throws ConfigError on anything else.
Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

/// LDAG-based algorithms need LT weights.
bool requires_lt_weights(Algorithm algorithm);

/// Knobs shared by every selection algorithm; each uses the ones it needs.
struct SelectionParams {
  double theta = kDefaultLdagTheta;
  std::size_t permutations = 200;  // sv-ldag, per LDAG
  std::size_t samples = 200;       // bi-ldag, per factor
  double degree_discount_p = 0.01;
  DiffusionModel model = DiffusionModel::lt;  // celf
  std::size_t celf_runs = 200;
  bool unguarded_dsv = false;
  std::uint64_t seed = 1;
  int threads = 0;
};

/// Runs one algorithm. Throws ConfigError when an LDAG algorithm is asked to
/// run on weights that break the LT invariant.
SeedSet select_seeds(const Graph& g, Algorithm algorithm, std::size_t k,
                     const SelectionParams& params);

struct KPercentRange {
  double from = 2.0;
  double to = 30.0;
  double step = 4.0;
};

/// k = round(n * pct / 100) for pct = from, from + step, ... <= to, clamped
/// to [1, n], repeats removed. Throws ConfigError for percentages outside
/// (0, 100] or a non-positive step.
std::vector<std::size_t> expand_k_percent(const KPercentRange& range, std::size_t node_count);

/// Parses `FROM:TO:STEP`.
KPercentRange parse_k_percent(std::string_view text);

struct ExperimentConfig {
  std::string graph_path;
  Directedness directedness = Directedness::directed;
  /// nullopt keeps the weights from the file.
  std::optional<WeightScheme> scheme = WeightScheme::weighted_cascade();
  DiffusionModel model = DiffusionModel::lt;
  std::vector<Algorithm> algorithms;
  std::vector<std::size_t> k_values;
  std::optional<KPercentRange> k_percent;
  SelectionParams selection;
  std::size_t eval_runs = 10000;
  std::uint64_t seed = 1;
  /// Wall-clock selection times vary between runs; off keeps output
  /// byte-reproducible and leaves select_ms empty.
  bool timing = false;
  std::string output_path;
};

struct ResultRow {
  std::string algorithm;
  std::size_t k = 0;
  double spread_mean = 0.0;
  double spread_stddev = 0.0;
  std::optional<double> select_ms;
  std::size_t eval_runs = 0;
  std::uint64_t rng_seed = 0;
};

inline constexpr std::string_view kResultsHeader =
    "algo,k,spread_mean,spread_stddev,select_ms,eval_runs,rng_seed";

/// Every k value of the config (explicit list first, then the percent range),
/// repeats dropped, validated against the node count.
std::vector<std::size_t> resolve_k_values(const ExperimentConfig& config,
                                          std::size_t node_count);

/// Selects and evaluates every (algorithm, k) cell on an already loaded and
/// weighted graph; rows follow config order.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const Graph& g);

/// Loads and weights config.graph_path, then runs every cell.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace shapim
