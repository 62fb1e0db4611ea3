#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "semnet/graph.hpp"

namespace semnet {

// Stationary visit rates of an undirected random walk: strength / total
// strength. Zero-strength nodes get rate 0 and take no part in coding.
struct VisitRates {
  std::vector<double> p;  // per node
};

VisitRates visit_rates(const Graph& g, bool weighted = false);

// Node -> module assignment with dense module ids 0..n_modules-1.
struct Partition {
  std::vector<int> module_of;
  int n_modules = 0;

  static Partition singletons(int n_nodes);
  static Partition all_in_one(int n_nodes);
  // Renumbers modules in order of first appearance; the canonical encoding
  // used for deterministic tie-breaking.
  Partition canonical() const;
};

// Two-level description length of a random walk under a partition.
struct MapScore {
  double codelength = 0;              // L, bits per step
  std::vector<double> q_exit;         // per-module exit rate q_i
  std::vector<double> module_entropy; // per-module codebook entropy H(P^i)
  double index_entropy = 0;           // H(Q)
};

// Throws if the partition does not cover every node. Isolated nodes may sit
// in any module; they carry no flow and do not contribute to L.
MapScore map_equation(const Graph& g, const Partition& part, bool weighted = false);

// Seeded multilevel search for the partition minimizing the map equation:
// repeated single-unit moves (largest strict decrease), module aggregation,
// and node-level refinement, best of n_trials random sweep orders. Isolated
// nodes come back as singleton modules appended after the coded modules.
std::pair<Partition, MapScore> infomap_search(const Graph& g, std::uint64_t seed,
                                              int n_trials = 10,
                                              bool weighted = false);

struct CommunityRow {
  int community = 0;
  std::vector<std::string> members;  // alphabetical
};

// Modules sorted by size descending, ties by lexicographically smallest
// member; members alphabetical. Community ids follow that order.
std::vector<CommunityRow> communities_table(const Partition& part,
                                            const std::vector<std::string>& labels);

// CSV `year,community,members` with members joined by ';'.
void write_communities_csv(const std::filesystem::path& file, int year,
                           const std::vector<CommunityRow>& rows);

// One line per node: `module:rank visit_rate label`, modules in table order,
// members by descending visit rate.
void write_tree(const std::filesystem::path& file, const Graph& g,
                const Partition& part, bool weighted = false);

}  // namespace semnet
