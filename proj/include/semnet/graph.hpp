#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "semnet/infomet.hpp"
#include "semnet/topics.hpp"

namespace semnet {

// Undirected simple graph over string labels. Edges carry the similarity
// that created them; all metrics treat the graph as unweighted.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::vector<std::string> labels);

  // Throws on unknown endpoints, self-loops and duplicate edges.
  void add_edge(int u, int v, double weight = 1.0);

  int num_nodes() const { return static_cast<int>(labels_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  const std::vector<double>& neighbor_weights(int v) const { return adj_w_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

 private:
  std::vector<std::string> labels_;
  std::vector<std::pair<int, int>> edges_;  // stored with u < v
  std::vector<double> weights_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<double>> adj_w_;
};

struct NodeStats {
  int degree = 0;
  long neighbor_links = 0;       // edges among the node's neighbors
  double local_clustering = 0;   // 2 e / (k (k-1)), 0 when k < 2
};

struct MetricsRow {
  int year = 0;
  double density = 0;
  double avg_path_length = 0;
  double global_clustering = 0;
  int diameter = 0;
};

struct SmoothedSeries {
  int window = 0;
  int start_year = 0;  // year of the first smoothed value
  std::vector<double> values;
};

enum class ClusteringRule {
  kZeroForLowDegree,  // default: k < 2 contributes 0 to the average
  kExcludeLowDegree,
};

enum class SmoothAlign { kTrailing, kCentered };

// One node per row of the topic matrix; edge where pairwise NMI >= threshold.
// Throws on duplicate labels or fewer than 2 rows.
Graph build_network(const TopicMatrix& tm, double threshold = 0.8,
                    const NmiConfig& nmi = {});

// 2E / (N(N-1)); requires N >= 2.
double density(const Graph& g);

// Mean BFS distance over connected unordered pairs; throws when none exist.
double avg_path_length(const Graph& g);

// Mean local clustering coefficient over nodes.
double global_clustering(const Graph& g,
                         ClusteringRule rule = ClusteringRule::kZeroForLowDegree);

// Longest shortest path over connected pairs; throws when none exist.
int diameter(const Graph& g);

NodeStats node_stats(const Graph& g, int v);

// Trailing (default) or centered moving mean over full windows only.
// Throws when the series is shorter than the window.
SmoothedSeries moving_average(const std::vector<double>& values, int first_year,
                              int window = 10,
                              SmoothAlign align = SmoothAlign::kTrailing);

// --- file formats ---

// CSV `source,target,nmi`; isolated nodes are not representable here.
void write_edge_list_csv(const std::filesystem::path& file, const Graph& g);
Graph read_edge_list_csv(const std::filesystem::path& file);

// GraphML with an `nmi` edge attribute; keeps isolated nodes.
void write_graphml(const std::filesystem::path& file, const Graph& g);

// Undirected DOT for external rendering.
void write_dot(const std::filesystem::path& file, const Graph& g);

// CSV `year,density,avg_path_length,global_clustering,diameter`.
void write_metrics_csv(const std::filesystem::path& file,
                       const std::vector<MetricsRow>& rows);

void write_smoothed_csv(const std::filesystem::path& file,
                        const SmoothedSeries& s, const std::string& name);

}  // namespace semnet
