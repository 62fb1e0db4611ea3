#include "semnet/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace semnet {
namespace {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Single-source BFS distances; -1 marks unreachable.
std::vector<int> bfs_distances(const Graph& g, int source) {
  std::vector<int> dist(g.num_nodes(), -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

struct PathSummary {
  long long pair_count = 0;
  long long dist_sum = 0;
  int max_dist = 0;
};

PathSummary connected_pair_paths(const Graph& g) {
  PathSummary s;
  for (int u = 0; u < g.num_nodes(); ++u) {
    std::vector<int> dist = bfs_distances(g, u);
    for (int v = u + 1; v < g.num_nodes(); ++v) {
      if (dist[v] > 0) {
        s.pair_count += 1;
        s.dist_sum += dist[v];
        s.max_dist = std::max(s.max_dist, dist[v]);
      }
    }
  }
  return s;
}

}  // namespace

Graph::Graph(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("graph needs at least one node");
  adj_.resize(labels_.size());
  adj_w_.resize(labels_.size());
}

void Graph::add_edge(int u, int v, double weight) {
  if (u < 0 || v < 0 || u >= num_nodes() || v >= num_nodes())
    throw std::invalid_argument("edge endpoint out of range");
  if (u == v) throw std::invalid_argument("self-loops are not allowed");
  if (u > v) std::swap(u, v);
  for (int w : adj_[u])
    if (w == v) throw std::invalid_argument("duplicate edge");
  edges_.emplace_back(u, v);
  weights_.push_back(weight);
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  adj_w_[u].push_back(weight);
  adj_w_[v].push_back(weight);
}

Graph build_network(const TopicMatrix& tm, double threshold, const NmiConfig& nmi) {
  if (tm.n_docs() < 2)
    throw std::invalid_argument("need at least 2 rows to build a network");
  {
    std::set<std::string> seen;
    for (const auto& l : tm.labels)
      if (!seen.insert(l).second)
        throw std::invalid_argument("duplicate node label: " + l);
  }
  Graph g(tm.labels);
  for (int a = 0; a < tm.n_docs(); ++a) {
    for (int b = a + 1; b < tm.n_docs(); ++b) {
      MiResult r = normalized_mi(tm.row(a), tm.row(b), nmi);
      if (r.nmi >= threshold) g.add_edge(a, b, r.nmi);
    }
  }
  return g;
}

double density(const Graph& g) {
  const long long n = g.num_nodes();
  if (n < 2) throw std::invalid_argument("undefined density: fewer than 2 nodes");
  return 2.0 * g.num_edges() / (static_cast<double>(n) * (n - 1));
}

double avg_path_length(const Graph& g) {
  PathSummary s = connected_pair_paths(g);
  if (s.pair_count == 0) throw std::runtime_error("no paths: no connected pair");
  return static_cast<double>(s.dist_sum) / static_cast<double>(s.pair_count);
}

int diameter(const Graph& g) {
  PathSummary s = connected_pair_paths(g);
  if (s.pair_count == 0) throw std::runtime_error("no paths: no connected pair");
  return s.max_dist;
}

NodeStats node_stats(const Graph& g, int v) {
  NodeStats s;
  s.degree = g.degree(v);
  if (s.degree < 2) return s;
  const auto& nb = g.neighbors(v);
  std::vector<char> mark(g.num_nodes(), 0);
  for (int u : nb) mark[u] = 1;
  for (int u : nb)
    for (int w : g.neighbors(u))
      if (w > u && mark[w]) s.neighbor_links += 1;
  s.local_clustering = 2.0 * static_cast<double>(s.neighbor_links) /
                       (static_cast<double>(s.degree) * (s.degree - 1));
  return s;
}

double global_clustering(const Graph& g, ClusteringRule rule) {
  double sum = 0;
  int counted = 0;
  for (int v = 0; v < g.num_nodes(); ++v) {
    NodeStats s = node_stats(g, v);
    if (s.degree < 2 && rule == ClusteringRule::kExcludeLowDegree) continue;
    sum += s.local_clustering;
    counted += 1;
  }
  return counted == 0 ? 0.0 : sum / counted;
}

SmoothedSeries moving_average(const std::vector<double>& values, int first_year,
                              int window, SmoothAlign align) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (static_cast<int>(values.size()) < window)
    throw std::invalid_argument("series shorter than smoothing window");
  SmoothedSeries s;
  s.window = window;
  const int n_out = static_cast<int>(values.size()) - window + 1;
  s.start_year = align == SmoothAlign::kTrailing
                     ? first_year + window - 1
                     : first_year + (window - 1) / 2;
  for (int i = 0; i < n_out; ++i) {
    double acc = 0;
    for (int j = 0; j < window; ++j) acc += values[i + j];
    s.values.push_back(acc / window);
  }
  return s;
}

void write_edge_list_csv(const std::filesystem::path& file, const Graph& g) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << "source,target,nmi\n";
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    auto [u, v] = g.edges()[i];
    out << g.labels()[u] << ',' << g.labels()[v] << ','
        << format_real(g.weights()[i]) << '\n';
  }
}

Graph read_edge_list_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read: " + file.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("source,target", 0) != 0)
    throw std::runtime_error("bad edge list header in " + file.string());

  struct RawEdge {
    std::string a, b;
    double w;
  };
  std::vector<RawEdge> raw;
  std::map<std::string, int> ids;
  std::vector<std::string> labels;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    RawEdge e;
    std::string w;
    if (!std::getline(row, e.a, ',') || !std::getline(row, e.b, ','))
      throw std::runtime_error("bad edge list row " + std::to_string(lineno));
    e.w = std::getline(row, w, ',') && !w.empty() ? std::stod(w) : 1.0;
    for (const std::string* s : {&e.a, &e.b}) {
      if (ids.emplace(*s, static_cast<int>(labels.size())).second)
        labels.push_back(*s);
    }
    raw.push_back(std::move(e));
  }
  if (labels.empty()) throw std::runtime_error("edge list has no edges");
  Graph g(labels);
  for (const auto& e : raw) g.add_edge(ids[e.a], ids[e.b], e.w);
  return g;
}

namespace {
std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}
}  // namespace

void write_graphml(const std::filesystem::path& file, const Graph& g) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"nmi\" for=\"edge\" attr.name=\"nmi\" attr.type=\"double\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (const auto& label : g.labels())
    out << "    <node id=\"" << xml_escape(label) << "\"/>\n";
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    auto [u, v] = g.edges()[i];
    out << "    <edge source=\"" << xml_escape(g.labels()[u]) << "\" target=\""
        << xml_escape(g.labels()[v]) << "\"><data key=\"nmi\">"
        << format_real(g.weights()[i]) << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_dot(const std::filesystem::path& file, const Graph& g) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << "graph semnet {\n";
  std::vector<char> has_edge(g.num_nodes(), 0);
  for (auto [u, v] : g.edges()) has_edge[u] = has_edge[v] = 1;
  for (int v = 0; v < g.num_nodes(); ++v)
    if (!has_edge[v]) out << "  \"" << g.labels()[v] << "\";\n";
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    auto [u, v] = g.edges()[i];
    out << "  \"" << g.labels()[u] << "\" -- \"" << g.labels()[v]
        << "\" [weight=" << format_real(g.weights()[i]) << "];\n";
  }
  out << "}\n";
}

void write_metrics_csv(const std::filesystem::path& file,
                       const std::vector<MetricsRow>& rows) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << "year,density,avg_path_length,global_clustering,diameter\n";
  for (const auto& r : rows) {
    out << r.year << ',' << format_real(r.density) << ','
        << format_real(r.avg_path_length) << ','
        << format_real(r.global_clustering) << ',' << r.diameter << '\n';
  }
}

void write_smoothed_csv(const std::filesystem::path& file,
                        const SmoothedSeries& s, const std::string& name) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << "year," << name << "_ma" << s.window << '\n';
  for (std::size_t i = 0; i < s.values.size(); ++i)
    out << (s.start_year + static_cast<int>(i)) << ','
        << format_real(s.values[i]) << '\n';
}

}  // namespace semnet
