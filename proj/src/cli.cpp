#include "shapim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "shapim/diffusion.hpp"
#include "shapim/error.hpp"
#include "shapim/experiment.hpp"
#include "shapim/graph.hpp"
#include "shapim/ldag.hpp"
#include "shapim/ldag_games.hpp"

namespace shapim {

namespace {

// Thrown for bad option values that CLI11 cannot validate by itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphFlags {
  std::string path;
  bool undirected = false;
  std::string scheme = "weighted-cascade";

  void attach(CLI::App& app) {
    app.add_option("--graph", path, "Edge-list file (SRC TGT [W] per line)")->required();
    app.add_flag("--undirected", undirected,
                 "Treat each line as an undirected edge (both arcs materialized)");
    app.add_option("--scheme", scheme,
                   "Edge weights: weighted-cascade, lt-uniform, uniform-ic:P, or file")
        ->capture_default_str();
  }

  std::optional<WeightScheme> weight_scheme() const {
    if (scheme == "file") return std::nullopt;
    try {
      return WeightScheme::parse(scheme);
    } catch (const ParseError& e) {
      throw UsageError(e.what());
    }
  }

  Graph load() const {
    const auto ws = weight_scheme();
    Graph g = load_edge_list(path, undirected ? Directedness::undirected : Directedness::directed);
    return ws ? apply_weights(g, *ws) : g;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::string trim(std::string text) {
  text.erase(0, text.find_first_not_of(" \t\r"));
  text.erase(text.find_last_not_of(" \t\r") + 1);
  return text;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Inlines `--config FILE` for the experiment subcommand. Every `key=value`
// line becomes `--key=value` unless the command line already sets that flag.
// Blank lines and lines starting with '#' or ';' are skipped; a value may be
// wrapped in double quotes.
std::vector<std::string> expand_config_file(std::vector<std::string> args) {
  if (args.empty() || args.front() != "experiment") return args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty() || key == "config") {
      throw UsageError(path + ":" + std::to_string(line_no) + ": bad key '" + key + "'");
    }
    const std::string flag = "--" + key;
    if (!has_flag(args, flag)) args.push_back(flag + "=" + value);
  }
  return args;
}

DiffusionModel model_or_usage(const std::string& text) {
  try {
    return parse_model(text);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
}

Algorithm algorithm_or_usage(const std::string& text) {
  try {
    return parse_algorithm(text);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

NodeId node_by_label(const Graph& g, const std::string& label) {
  const auto id = g.find_label(label);
  if (!id) throw ValidationError("node '" + label + "' not in graph");
  return *id;
}

SeedSet read_seed_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open seeds file '" + path + "'");
  SeedSet seeds;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    line.erase(0, line.find_first_not_of(" \t"));
    line.erase(line.find_last_not_of(" \t") + 1);
    if (line.empty() || line[0] == '#') continue;
    seeds.push_back(node_by_label(g, line));
  }
  return seeds;
}

std::string format_fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

// Selection flags shared by seed-select and experiment.
struct SelectionFlags {
  SelectionParams params;
  std::string model = "lt";

  void attach(CLI::App& app) {
    app.add_option("--theta", params.theta, "LDAG influence threshold in (0,1]")
        ->capture_default_str();
    app.add_option("--permutations", params.permutations,
                   "sv-ldag: sampled permutations per LDAG")
        ->capture_default_str();
    app.add_option("--samples", params.samples, "bi-ldag: subset samples per factor")
        ->capture_default_str();
    app.add_option("--dd-p", params.degree_discount_p,
                   "degree-discount: propagation probability p")
        ->capture_default_str();
    app.add_option("--celf-runs", params.celf_runs,
                   "celf: Monte Carlo runs per spread evaluation")
        ->capture_default_str();
    app.add_flag("--unguarded-dsv", params.unguarded_dsv,
                 "dsv: discount on every neighbor visit, even for nodes already infected");
    app.add_option("--threads", params.threads, "Worker threads (0 = all)")
        ->capture_default_str();
  }
};

int seed_select(const GraphFlags& graph, SelectionFlags selection, const std::string& algo,
                std::size_t k, std::uint64_t seed, const std::string& index_dump,
                std::ostream& out) {
  const Algorithm algorithm = algorithm_or_usage(algo);
  selection.params.model = model_or_usage(selection.model);
  selection.params.seed = seed;
  const Graph g = graph.load();
  if (k < 1 || k > g.node_count()) {
    throw UsageError("--k must lie in [1, " + std::to_string(g.node_count()) + "]");
  }

  SeedSet seeds;
  if (!index_dump.empty()) {
    if (algorithm != Algorithm::sv_ldag && algorithm != Algorithm::bi_ldag) {
      throw UsageError("--index-dump applies to sv-ldag and bi-ldag only");
    }
    if (!g.satisfies_lt_invariant()) {
      throw ConfigError("LDAG algorithms need LT weights (incoming sums <= 1)");
    }
    LdagIndexOptions options;
    options.theta = selection.params.theta;
    options.kind = algorithm == Algorithm::sv_ldag ? IndexKind::shapley : IndexKind::banzhaf;
    options.budget = algorithm == Algorithm::sv_ldag ? selection.params.permutations
                                                     : selection.params.samples;
    options.seed = seed;
    options.threads = selection.params.threads;
    std::vector<LdagScores> scores;
    seeds = ldag_index_select(g, k, options, &scores);
    std::ofstream dump(index_dump);
    if (!dump) throw ParseError("cannot write '" + index_dump + "'");
    write_index_csv(dump, scores, g);
  } else {
    seeds = select_seeds(g, algorithm, k, selection.params);
  }
  for (NodeId v : seeds) out << g.label(v) << '\n';
  return 0;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shapley-value seed selection and influence-spread evaluation", "shapim"};
  app.require_subcommand(1);

  // seed-select
  auto* select_cmd = app.add_subcommand("seed-select", "Select k seed nodes, print their labels");
  GraphFlags select_graph;
  SelectionFlags select_flags;
  std::string select_algo = "dsv";
  std::size_t select_k = 0;
  std::uint64_t select_seed = 1;
  std::string index_dump;
  select_graph.attach(*select_cmd);
  select_flags.attach(*select_cmd);
  select_cmd
      ->add_option("--algo", select_algo,
                   "dsv, sv-fringe, sv-surrounding, sv-ldag, bi-ldag, greedy-ldag, celf, "
                   "degree-discount")
      ->capture_default_str();
  select_cmd->add_option("--k", select_k, "Number of seeds")->required();
  select_cmd->add_option("--model", select_flags.model, "celf: diffusion model (ic|lt)")
      ->capture_default_str();
  select_cmd->add_option("--rng-seed", select_seed, "Base random seed")->capture_default_str();
  select_cmd->add_option("--index-dump", index_dump,
                         "sv-ldag/bi-ldag: write per-LDAG indices as root,node,index CSV");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Monte Carlo spread of a seed set");
  GraphFlags eval_graph;
  std::string eval_model = "lt";
  std::string seeds_path;
  std::size_t eval_runs = 10000;
  std::uint64_t eval_seed = 1;
  int eval_threads = 0;
  eval_graph.attach(*eval_cmd);
  eval_cmd->add_option("--model", eval_model, "Diffusion model (ic|lt)")->capture_default_str();
  eval_cmd->add_option("--seeds", seeds_path, "Seed file, one node label per line")->required();
  eval_cmd->add_option("--runs", eval_runs, "Monte Carlo runs")->capture_default_str();
  eval_cmd->add_option("--rng-seed", eval_seed, "Base random seed")->capture_default_str();
  eval_cmd->add_option("--threads", eval_threads, "Worker threads (0 = all)")
      ->capture_default_str();

  // experiment
  auto* exp_cmd = app.add_subcommand(
      "experiment", "Select and evaluate every (algorithm, k) cell, write CSV results");
  std::string exp_config;
  exp_cmd->add_option("--config", exp_config,
                      "Flat key=value file using flag names; command-line flags take precedence");
  GraphFlags exp_graph;
  SelectionFlags exp_flags;
  std::string exp_model = "lt";
  std::string exp_algos = "dsv,sv-ldag,greedy-ldag,degree-discount";
  std::string exp_k;
  std::string exp_k_percent;
  std::size_t exp_runs = 10000;
  std::uint64_t exp_seed = 1;
  bool exp_timing = false;
  std::string exp_output;
  exp_graph.attach(*exp_cmd);
  exp_flags.attach(*exp_cmd);
  exp_cmd->add_option("--model", exp_model, "Evaluation model (ic|lt); also used by celf")
      ->capture_default_str();
  exp_cmd->add_option("--algos", exp_algos, "Comma-separated algorithm list")
      ->capture_default_str();
  exp_cmd->add_option("--k", exp_k, "Comma-separated seed-set sizes");
  exp_cmd->add_option("--k-percent", exp_k_percent,
                      "Seed-set sizes as FROM:TO:STEP percent of the node count");
  exp_cmd->add_option("--runs", exp_runs, "Monte Carlo evaluation runs")->capture_default_str();
  exp_cmd->add_option("--rng-seed", exp_seed, "Base random seed")->capture_default_str();
  exp_cmd->add_flag("--timing", exp_timing,
                    "Record selection wall time in select_ms (output no longer reproducible)");
  exp_cmd->add_option("--output", exp_output, "CSV output path (default: stdout)");

  // ldag-dump
  auto* dump_cmd = app.add_subcommand("ldag-dump", "Write the LDAG of one node as an edge list");
  GraphFlags dump_graph;
  std::string dump_root;
  double dump_theta = kDefaultLdagTheta;
  std::string dump_output;
  dump_graph.attach(*dump_cmd);
  dump_cmd->add_option("--root", dump_root, "Root node label")->required();
  dump_cmd->add_option("--theta", dump_theta, "Influence threshold in (0,1]")
      ->capture_default_str();
  dump_cmd->add_option("--output", dump_output, "Output path (default: stdout)");

  try {
    std::vector<std::string> expanded;
    try {
      expanded = expand_config_file({args.begin(), args.end()});
    } catch (const UsageError& e) {
      err << e.what() << '\n';
      return kUsageExit;
    }
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageExit;
  }

  try {
    if (select_cmd->parsed()) {
      return seed_select(select_graph, select_flags, select_algo, select_k, select_seed,
                         index_dump, out);
    }
    if (eval_cmd->parsed()) {
      const DiffusionModel model = model_or_usage(eval_model);
      const Graph g = eval_graph.load();
      const SeedSet seeds = read_seed_file(seeds_path, g);
      const SpreadEstimate est =
          estimate_spread(g, model, seeds, eval_runs, eval_seed, eval_threads);
      out << "mean=" << format_fixed(est.mean) << " stddev=" << format_fixed(est.stddev)
          << " runs=" << est.runs << '\n';
      return 0;
    }
    if (exp_cmd->parsed()) {
      ExperimentConfig config;
      config.graph_path = exp_graph.path;
      config.directedness = exp_graph.undirected ? Directedness::undirected : Directedness::directed;
      config.scheme = exp_graph.weight_scheme();
      config.model = model_or_usage(exp_model);
      for (const auto& name : split_list(exp_algos)) {
        config.algorithms.push_back(algorithm_or_usage(name));
      }
      for (const auto& item : split_list(exp_k)) {
        std::size_t k = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
          throw UsageError("bad k value '" + item + "'");
        }
        config.k_values.push_back(k);
      }
      if (!exp_k_percent.empty()) {
        try {
          config.k_percent = parse_k_percent(exp_k_percent);
        } catch (const ConfigError& e) {
          throw UsageError(e.what());
        }
      }
      config.selection = exp_flags.params;
      config.selection.model = config.model;
      config.eval_runs = exp_runs;
      config.seed = exp_seed;
      config.timing = exp_timing;
      config.output_path = exp_output;

      const auto rows = run_experiment(config);
      if (exp_output.empty()) {
        write_results_csv(out, rows);
      } else {
        std::ofstream file(exp_output);
        if (!file) throw ParseError("cannot write '" + exp_output + "'");
        write_results_csv(file, rows);
      }
      return 0;
    }
    if (dump_cmd->parsed()) {
      const Graph g = dump_graph.load();
      const Ldag d = build_ldag(g, node_by_label(g, dump_root), dump_theta);
      if (dump_output.empty()) {
        write_ldag(out, d, g);
      } else {
        std::ofstream file(dump_output);
        if (!file) throw ParseError("cannot write '" + dump_output + "'");
        write_ldag(file, d, g);
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageExit;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageExit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsageExit;
}

}  // namespace shapim
