#include "shapim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "shapim/error.hpp"

namespace shapim {

Graph Graph::from_edges(std::size_t node_count, std::vector<Edge> edges,
                        std::vector<std::string> labels) {
  for (const Edge& e : edges) {
    if (e.source >= node_count || e.target >= node_count) {
      throw ValidationError("edge endpoint out of range: " +
                            std::to_string(e.source) + " -> " +
                            std::to_string(e.target));
    }
    if (e.source == e.target) {
      throw ValidationError("self-loop on node " + std::to_string(e.source));
    }
    if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
      throw ValidationError("edge weight outside [0,1] on " +
                            std::to_string(e.source) + " -> " +
                            std::to_string(e.target));
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].source == edges[i - 1].source &&
        edges[i].target == edges[i - 1].target) {
      throw ValidationError("duplicate edge " + std::to_string(edges[i].source) +
                            " -> " + std::to_string(edges[i].target));
    }
  }
  if (labels.size() > node_count) {
    throw ValidationError("more labels than nodes");
  }
  labels.resize(node_count);
  for (std::size_t v = 0; v < node_count; ++v) {
    if (labels[v].empty()) labels[v] = std::to_string(v);
  }

  Graph g;
  g.node_count_ = node_count;
  g.edges_ = std::move(edges);
  g.labels_ = std::move(labels);
  g.build_index();
  return g;
}

void Graph::build_index() {
  const std::size_t n = node_count_;
  const std::size_t m = edges_.size();

  label_index_.clear();
  label_index_.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!label_index_.emplace(labels_[v], static_cast<NodeId>(v)).second) {
      throw ValidationError("duplicate node label '" + labels_[v] + "'");
    }
  }

  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++out_offsets_[e.source + 1];
    ++in_offsets_[e.target + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  out_targets_.resize(m);
  out_weights_.resize(m);
  in_sources_.resize(m);
  in_weights_.resize(m);
  std::vector<std::size_t> in_cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  // edges_ is sorted by source, so out-adjacency is a straight copy and each
  // in-list ends up sorted by source.
  for (std::size_t i = 0; i < m; ++i) {
    const Edge& e = edges_[i];
    out_targets_[i] = e.target;
    out_weights_[i] = e.weight;
    const std::size_t slot = in_cursor[e.target]++;
    in_sources_[slot] = e.source;
    in_weights_[slot] = e.weight;
  }

  nbr_offsets_.assign(n + 1, 0);
  nbrs_.clear();
  nbrs_.reserve(2 * m);
  std::vector<NodeId> scratch;
  for (std::size_t v = 0; v < n; ++v) {
    const auto vid = static_cast<NodeId>(v);
    auto outs = out_neighbors(vid);
    auto ins = in_neighbors(vid);
    scratch.clear();
    std::set_union(outs.begin(), outs.end(), ins.begin(), ins.end(),
                   std::back_inserter(scratch));
    nbrs_.insert(nbrs_.end(), scratch.begin(), scratch.end());
    nbr_offsets_[v + 1] = nbrs_.size();
  }
}

std::optional<double> Graph::weight(NodeId u, NodeId v) const {
  auto outs = out_neighbors(u);
  auto it = std::lower_bound(outs.begin(), outs.end(), v);
  if (it == outs.end() || *it != v) return std::nullopt;
  return out_weights(u)[static_cast<std::size_t>(it - outs.begin())];
}

std::optional<NodeId> Graph::find_label(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

bool Graph::satisfies_lt_invariant() const {
  for (std::size_t v = 0; v < node_count_; ++v) {
    double sum = 0.0;
    for (double w : in_weights(static_cast<NodeId>(v))) sum += w;
    if (sum > 1.0 + kLtSumTolerance) return false;
  }
  return true;
}

Graph Graph::with_weights(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) {
    throw ValidationError("weight vector length does not match arc count");
  }
  std::vector<Edge> edges = edges_;
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = weights[i];
  return from_edges(node_count_, std::move(edges), labels_);
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.node_count_ != b.node_count_ || a.labels_ != b.labels_ ||
      a.edges_.size() != b.edges_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const Edge& x = a.edges_[i];
    const Edge& y = b.edges_[i];
    if (x.source != y.source || x.target != y.target || x.weight != y.weight) {
      return false;
    }
  }
  return true;
}

namespace {

struct RawEdge {
  std::string source;
  std::string target;
  double weight;
};

bool is_unsigned_integer(const std::string& s) {
  return !s.empty() && s.size() <= 19 &&
         std::all_of(s.begin(), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Graph read_edge_list(std::istream& in, Directedness directedness) {
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(std::move(tok));
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 2 or 3 fields, got " +
                       std::to_string(tokens.size()));
    }
    double w = 1.0;
    if (tokens.size() == 3) {
      const std::string& t = tokens[2];
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), w);
      if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad weight '" + t + "'");
      }
      if (!(w >= 0.0 && w <= 1.0)) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": weight outside [0,1]");
      }
    }
    if (tokens[0] == tokens[1]) {
      throw ValidationError("line " + std::to_string(line_no) + ": self-loop on '" +
                            tokens[0] + "'");
    }
    raw.push_back({std::move(tokens[0]), std::move(tokens[1]), w});
  }

  std::vector<std::string> labels;
  labels.reserve(raw.size() * 2);
  for (const RawEdge& e : raw) {
    labels.push_back(e.source);
    labels.push_back(e.target);
  }
  const bool numeric = std::all_of(labels.begin(), labels.end(), is_unsigned_integer);
  auto label_less = [numeric](const std::string& a, const std::string& b) {
    if (numeric) {
      const auto x = std::stoull(a);
      const auto y = std::stoull(b);
      if (x != y) return x < y;
    }
    return a < b;
  };
  std::sort(labels.begin(), labels.end(), label_less);
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::unordered_map<std::string, NodeId> ids;
  ids.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ids.emplace(labels[i], static_cast<NodeId>(i));
  }

  std::vector<Edge> edges;
  edges.reserve(directedness == Directedness::undirected ? 2 * raw.size() : raw.size());
  for (const RawEdge& e : raw) {
    const NodeId s = ids.at(e.source);
    const NodeId t = ids.at(e.target);
    edges.push_back({s, t, e.weight});
    if (directedness == Directedness::undirected) edges.push_back({t, s, e.weight});
  }
  const std::size_t n = labels.size();
  return Graph::from_edges(n, std::move(edges), std::move(labels));
}

Graph load_edge_list(const std::string& path, Directedness directedness) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  return read_edge_list(in, directedness);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  char buf[64];
  for (const Edge& e : g.edges()) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, e.weight);
    out << g.label(e.source) << ' ' << g.label(e.target) << ' '
        << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
}

WeightScheme WeightScheme::parse(std::string_view text) {
  if (text == "weighted-cascade") return weighted_cascade();
  if (text == "lt-uniform") return lt_uniform();
  constexpr std::string_view prefix = "uniform-ic:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view num = text.substr(prefix.size());
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw ParseError("bad uniform-ic probability in '" + std::string(text) + "'");
    }
    return uniform_ic(p);
  }
  throw ParseError("unknown weight scheme '" + std::string(text) + "'");
}

std::string WeightScheme::to_string() const {
  switch (kind) {
    case Kind::uniform_ic: {
      std::ostringstream os;
      os << "uniform-ic:" << p;
      return os.str();
    }
    case Kind::weighted_cascade:
      return "weighted-cascade";
    case Kind::lt_uniform:
      return "lt-uniform";
  }
  return {};
}

Graph apply_weights(const Graph& g, const WeightScheme& scheme) {
  std::vector<double> weights(g.arc_count());
  const auto edges = g.edges();
  switch (scheme.kind) {
    case WeightScheme::Kind::uniform_ic:
      if (!(scheme.p > 0.0 && scheme.p <= 1.0)) {
        throw ValidationError("uniform-ic probability must lie in (0,1]");
      }
      std::fill(weights.begin(), weights.end(), scheme.p);
      break;
    case WeightScheme::Kind::weighted_cascade:
    case WeightScheme::Kind::lt_uniform:
      for (std::size_t i = 0; i < edges.size(); ++i) {
        weights[i] = 1.0 / static_cast<double>(g.in_degree(edges[i].target));
      }
      break;
  }
  return g.with_weights(weights);
}

std::size_t undirected_degree(const Graph& g, NodeId v) {
  if (v >= g.node_count()) {
    throw std::out_of_range("node id " + std::to_string(v) + " out of range");
  }
  return g.degree(v);
}

}  // namespace shapim
