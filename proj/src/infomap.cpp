#include "semnet/infomap.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "semnet/rng.hpp"

namespace semnet {
namespace {

inline double plogp(double p) { return p > 0 ? p * std::log2(p) : 0.0; }

std::vector<double> node_strengths(const Graph& g, bool weighted) {
  std::vector<double> s(g.num_nodes(), 0.0);
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    auto [u, v] = g.edges()[i];
    double w = weighted ? g.weights()[i] : 1.0;
    s[u] += w;
    s[v] += w;
  }
  return s;
}

// Greedy minimizer state. Module aggregates are kept in raw weight units
// (divide by two_w for rates) so unweighted arithmetic stays integer-exact.
class Search {
 public:
  Search(const Graph& g, bool weighted)
      : g_(g),
        weighted_(weighted),
        strength_(node_strengths(g, weighted)),
        in_unit_(g.num_nodes(), 0) {
    two_w_ = std::accumulate(strength_.begin(), strength_.end(), 0.0);
    for (int v = 0; v < g.num_nodes(); ++v)
      if (strength_[v] > 0) coded_.push_back(v);
  }

  const std::vector<int>& coded_nodes() const { return coded_; }

  // Expanded two-level codelength over current aggregates; the per-move
  // delta below is this expression's difference.
  double codelength() const {
    double sum_exit = 0, exit_terms = 0, stay_terms = 0;
    for (std::size_t m = 0; m < mod_cut_.size(); ++m) {
      if (mod_size_[m] == 0) continue;
      double q = mod_cut_[m] / two_w_;
      sum_exit += q;
      exit_terms += plogp(q);
      stay_terms += plogp((mod_cut_[m] + mod_strength_[m]) / two_w_);
    }
    double nodes = 0;
    for (int v : coded_) nodes += plogp(strength_[v] / two_w_);
    return plogp(sum_exit) - 2 * exit_terms + stay_terms - nodes;
  }

  void reset_to_singletons() {
    module_of_.assign(g_.num_nodes(), -1);
    mod_cut_.clear();
    mod_strength_.clear();
    mod_size_.clear();
    free_modules_.clear();
    for (int v : coded_) {
      module_of_[v] = static_cast<int>(mod_cut_.size());
      mod_cut_.push_back(strength_[v]);
      mod_strength_.push_back(strength_[v]);
      mod_size_.push_back(1);
    }
    sum_cut_ = std::accumulate(mod_cut_.begin(), mod_cut_.end(), 0.0);
  }

  // One sweep of unit moves in the given order; returns true if any applied.
  bool sweep(const std::vector<std::vector<int>>& units,
             const std::vector<int>& order) {
    bool moved = false;
    for (int idx : order) moved |= try_move(units[idx]);
    return moved;
  }

  std::vector<std::vector<int>> current_modules() const {
    std::vector<std::vector<int>> groups(mod_cut_.size());
    for (int v : coded_) groups[module_of_[v]].push_back(v);
    std::erase_if(groups, [](const auto& m) { return m.empty(); });
    return groups;
  }

  // Raw (possibly sparse) module ids; -1 for isolated nodes.
  const std::vector<int>& raw_module_of() const { return module_of_; }

 private:
  // Move unit U (all members share a module) to the neighbor module with the
  // largest strict codelength decrease, or split it into a fresh module.
  bool try_move(const std::vector<int>& unit) {
    const int a = module_of_[unit[0]];
    double unit_strength = 0;
    double w_internal2 = 0;  // internal weight, both endpoints counted
    double w_to_a = 0;
    flows_.clear();
    for (int v : unit) in_unit_[v] = 1;
    for (int v : unit) {
      unit_strength += strength_[v];
      const auto& nb = g_.neighbors(v);
      const auto& nw = g_.neighbor_weights(v);
      for (std::size_t j = 0; j < nb.size(); ++j) {
        int u = nb[j];
        double w = weighted_ ? nw[j] : 1.0;
        if (in_unit_[u]) {
          w_internal2 += w;
        } else if (module_of_[u] == a) {
          w_to_a += w;
        } else {
          flows_[module_of_[u]] += w;
        }
      }
    }
    for (int v : unit) in_unit_[v] = 0;

    // Source aggregates after removing the unit.
    const double cut_a_new =
        clamp0(mod_cut_[a] - unit_strength + w_internal2 + 2 * w_to_a);
    const double str_a_new = clamp0(mod_strength_[a] - unit_strength);
    const double exit_of_unit = unit_strength - w_internal2;  // if alone

    double best_delta = -1e-12;
    int best_target = kNoTarget;
    double best_w_to_b = 0;
    for (const auto& [b, w_to_b] : flows_) {
      double delta = move_delta(a, b, cut_a_new, str_a_new, unit_strength,
                                exit_of_unit, w_to_b);
      if (delta < best_delta) {
        best_delta = delta;
        best_target = b;
        best_w_to_b = w_to_b;
      }
    }
    // Splitting into a fresh module, only when the unit leaves members behind.
    if (mod_size_[a] > static_cast<int>(unit.size())) {
      double delta = move_delta(a, -1, cut_a_new, str_a_new, unit_strength,
                                exit_of_unit, 0.0);
      if (delta < best_delta) {
        best_delta = delta;
        best_target = kFreshTarget;
        best_w_to_b = 0;
      }
    }
    if (best_target == kNoTarget) return false;

#ifndef NDEBUG
    const double before = codelength();
#endif
    int b = best_target == kFreshTarget ? allocate_module() : best_target;
    apply_move(unit, a, b, cut_a_new, str_a_new, unit_strength, exit_of_unit,
               best_w_to_b);
#ifndef NDEBUG
    assert(codelength() < before);  // accepted moves strictly decrease L
#endif
    return true;
  }

  double move_delta(int a, int b, double cut_a_new, double str_a_new,
                    double unit_strength, double exit_of_unit,
                    double w_to_b) const {
    const double cut_a = mod_cut_[a], str_a = mod_strength_[a];
    const double cut_b = b >= 0 ? mod_cut_[b] : 0.0;
    const double str_b = b >= 0 ? mod_strength_[b] : 0.0;
    const double cut_b_new = clamp0(cut_b + exit_of_unit - 2 * w_to_b);
    const double str_b_new = str_b + unit_strength;
    const double sum_cut_new = sum_cut_ - cut_a - cut_b + cut_a_new + cut_b_new;

    double delta = plogp(sum_cut_new / two_w_) - plogp(sum_cut_ / two_w_);
    delta -= 2 * (plogp(cut_a_new / two_w_) + plogp(cut_b_new / two_w_) -
                  plogp(cut_a / two_w_) - plogp(cut_b / two_w_));
    delta += plogp((cut_a_new + str_a_new) / two_w_) +
             plogp((cut_b_new + str_b_new) / two_w_) -
             plogp((cut_a + str_a) / two_w_) - plogp((cut_b + str_b) / two_w_);
    return delta;
  }

  void apply_move(const std::vector<int>& unit, int a, int b, double cut_a_new,
                  double str_a_new, double unit_strength, double exit_of_unit,
                  double w_to_b) {
    const double cut_b_new = clamp0(mod_cut_[b] + exit_of_unit - 2 * w_to_b);
    sum_cut_ += cut_a_new + cut_b_new - mod_cut_[a] - mod_cut_[b];
    mod_cut_[a] = cut_a_new;
    mod_strength_[a] = str_a_new;
    mod_size_[a] -= static_cast<int>(unit.size());
    mod_cut_[b] = cut_b_new;
    mod_strength_[b] += unit_strength;
    mod_size_[b] += static_cast<int>(unit.size());
    for (int v : unit) module_of_[v] = b;
    if (mod_size_[a] == 0) {
      mod_cut_[a] = 0;
      mod_strength_[a] = 0;
      free_modules_.push_back(a);
    }
  }

  int allocate_module() {
    if (!free_modules_.empty()) {
      int m = free_modules_.back();
      free_modules_.pop_back();
      return m;
    }
    mod_cut_.push_back(0);
    mod_strength_.push_back(0);
    mod_size_.push_back(0);
    return static_cast<int>(mod_cut_.size()) - 1;
  }

  static constexpr int kNoTarget = -1;
  static constexpr int kFreshTarget = -2;

  static double clamp0(double x) { return std::abs(x) < 1e-12 ? 0.0 : x; }

  const Graph& g_;
  bool weighted_;
  std::vector<double> strength_;
  std::vector<int> coded_;
  double two_w_ = 0;

  std::vector<int> module_of_;
  std::vector<double> mod_cut_;
  std::vector<double> mod_strength_;
  std::vector<int> mod_size_;
  std::vector<int> free_modules_;
  double sum_cut_ = 0;

  std::vector<char> in_unit_;
  std::map<int, double> flows_;
};

// Repeats sweeps over the given units until none moves.
bool move_until_stable(Search& search, const std::vector<std::vector<int>>& units,
                       CounterRng& rng) {
  std::vector<int> order(units.size());
  std::iota(order.begin(), order.end(), 0);
  bool ever = false;
  for (;;) {
    rng.shuffle(order);
    if (!search.sweep(units, order)) break;
    ever = true;
  }
  return ever;
}

// Compacts coded module ids by first appearance, then appends isolated
// nodes (marked -1) as singleton modules after the coded ones.
Partition complete_partition(const Graph& g, const std::vector<int>& coded_part) {
  Partition p;
  p.module_of.assign(g.num_nodes(), -1);
  std::map<int, int> remap;
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (coded_part[v] < 0) continue;
    auto [it, fresh] = remap.emplace(coded_part[v], p.n_modules);
    if (fresh) ++p.n_modules;
    p.module_of[v] = it->second;
  }
  for (int v = 0; v < g.num_nodes(); ++v)
    if (p.module_of[v] < 0) p.module_of[v] = p.n_modules++;
  return p;
}

}  // namespace

VisitRates visit_rates(const Graph& g, bool weighted) {
  std::vector<double> s = node_strengths(g, weighted);
  double total = std::accumulate(s.begin(), s.end(), 0.0);
  if (total <= 0) throw std::runtime_error("no walk: graph has no edges");
  VisitRates r;
  r.p.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r.p[i] = s[i] / total;
  return r;
}

Partition Partition::singletons(int n_nodes) {
  Partition p;
  p.module_of.resize(n_nodes);
  std::iota(p.module_of.begin(), p.module_of.end(), 0);
  p.n_modules = n_nodes;
  return p;
}

Partition Partition::all_in_one(int n_nodes) {
  Partition p;
  p.module_of.assign(n_nodes, 0);
  p.n_modules = n_nodes > 0 ? 1 : 0;
  return p;
}

Partition Partition::canonical() const {
  Partition out;
  out.module_of.assign(module_of.size(), -1);
  std::vector<int> remap(n_modules, -1);
  for (std::size_t v = 0; v < module_of.size(); ++v) {
    int m = module_of[v];
    if (remap[m] < 0) remap[m] = out.n_modules++;
    out.module_of[v] = remap[m];
  }
  return out;
}

MapScore map_equation(const Graph& g, const Partition& part, bool weighted) {
  if (static_cast<int>(part.module_of.size()) != g.num_nodes())
    throw std::invalid_argument("partition does not cover the graph");
  for (int m : part.module_of)
    if (m < 0 || m >= part.n_modules)
      throw std::invalid_argument("node missing from partition");

  std::vector<double> strength = node_strengths(g, weighted);
  const double two_w = std::accumulate(strength.begin(), strength.end(), 0.0);

  MapScore score;
  score.q_exit.assign(part.n_modules, 0.0);
  score.module_entropy.assign(part.n_modules, 0.0);
  if (two_w <= 0) return score;  // nothing to code

  std::vector<double> mod_strength(part.n_modules, 0.0);
  for (int v = 0; v < g.num_nodes(); ++v)
    mod_strength[part.module_of[v]] += strength[v];
  std::vector<double> cut(part.n_modules, 0.0);
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    auto [u, v] = g.edges()[i];
    if (part.module_of[u] == part.module_of[v]) continue;
    double w = weighted ? g.weights()[i] : 1.0;
    cut[part.module_of[u]] += w;
    cut[part.module_of[v]] += w;
  }

  double q_total = 0;
  for (int m = 0; m < part.n_modules; ++m) {
    score.q_exit[m] = cut[m] / two_w;
    q_total += score.q_exit[m];
  }

  double index_term = 0;
  if (q_total > 0) {
    for (int m = 0; m < part.n_modules; ++m) {
      double q = score.q_exit[m] / q_total;
      score.index_entropy -= plogp(q);
    }
    index_term = q_total * score.index_entropy;
  }

  double module_sum = 0;
  std::vector<double> stay(part.n_modules, 0.0);
  for (int m = 0; m < part.n_modules; ++m)
    stay[m] = score.q_exit[m] + mod_strength[m] / two_w;
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (strength[v] <= 0) continue;
    int m = part.module_of[v];
    score.module_entropy[m] -= plogp((strength[v] / two_w) / stay[m]);
  }
  for (int m = 0; m < part.n_modules; ++m) {
    if (stay[m] <= 0) continue;
    score.module_entropy[m] -= plogp(score.q_exit[m] / stay[m]);
    module_sum += stay[m] * score.module_entropy[m];
  }

  score.codelength = index_term + module_sum;
  return score;
}

std::pair<Partition, MapScore> infomap_search(const Graph& g, std::uint64_t seed,
                                              int n_trials, bool weighted) {
  visit_rates(g, weighted);  // validates that a walk exists
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");

  Search search(g, weighted);
  const auto& coded = search.coded_nodes();

  // Baselines guarantee L(found) never exceeds the trivial partitions.
  std::vector<Partition> candidates;
  {
    std::vector<int> one(g.num_nodes(), -1);
    for (int v : coded) one[v] = 0;
    candidates.push_back(complete_partition(g, one));
    std::vector<int> single(g.num_nodes(), -1);
    int next = 0;
    for (int v : coded) single[v] = next++;
    candidates.push_back(complete_partition(g, single));
  }

  for (int trial = 0; trial < n_trials; ++trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    search.reset_to_singletons();

    std::vector<std::vector<int>> node_units;
    node_units.reserve(coded.size());
    for (int v : coded) node_units.push_back({v});

    for (;;) {
      bool improved = move_until_stable(search, node_units, rng);
      for (;;) {
        auto module_units = search.current_modules();
        if (module_units.size() <= 1) break;
        if (!move_until_stable(search, module_units, rng)) break;
        improved = true;
      }
      if (!improved) break;
    }

    candidates.push_back(complete_partition(g, search.raw_module_of()));
  }

  const Partition* best = nullptr;
  MapScore best_score;
  for (const Partition& p : candidates) {
    MapScore s = map_equation(g, p, weighted);
    if (!best || s.codelength < best_score.codelength - 1e-12 ||
        (std::abs(s.codelength - best_score.codelength) <= 1e-12 &&
         p.module_of < best->module_of)) {
      best = &p;
      best_score = s;
    }
  }
  return {*best, best_score};
}

std::vector<CommunityRow> communities_table(const Partition& part,
                                            const std::vector<std::string>& labels) {
  if (part.module_of.size() != labels.size())
    throw std::invalid_argument("label count does not match partition");
  std::vector<std::vector<std::string>> groups(part.n_modules);
  for (std::size_t v = 0; v < labels.size(); ++v)
    groups[part.module_of[v]].push_back(labels[v]);
  std::erase_if(groups, [](const auto& m) { return m.empty(); });
  for (auto& m : groups) std::sort(m.begin(), m.end());
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  std::vector<CommunityRow> rows;
  for (std::size_t i = 0; i < groups.size(); ++i)
    rows.push_back({static_cast<int>(i), std::move(groups[i])});
  return rows;
}

void write_communities_csv(const std::filesystem::path& file, int year,
                           const std::vector<CommunityRow>& rows) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << "year,community,members\n";
  for (const auto& row : rows) {
    out << year << ',' << row.community << ',';
    for (std::size_t i = 0; i < row.members.size(); ++i) {
      if (i) out << ';';
      out << row.members[i];
    }
    out << '\n';
  }
}

void write_tree(const std::filesystem::path& file, const Graph& g,
                const Partition& part, bool weighted) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());

  std::vector<double> strength = node_strengths(g, weighted);
  double total = std::accumulate(strength.begin(), strength.end(), 0.0);
  std::vector<double> rate(g.num_nodes(), 0.0);
  if (total > 0)
    for (int v = 0; v < g.num_nodes(); ++v) rate[v] = strength[v] / total;

  std::map<std::string, int> node_of;
  for (int v = 0; v < g.num_nodes(); ++v) node_of[g.labels()[v]] = v;

  auto rows = communities_table(part, g.labels());
  char buf[40];
  for (const auto& row : rows) {
    std::vector<int> members;
    for (const auto& label : row.members) members.push_back(node_of[label]);
    std::stable_sort(members.begin(), members.end(), [&](int a, int b) {
      if (rate[a] != rate[b]) return rate[a] > rate[b];
      return g.labels()[a] < g.labels()[b];
    });
    for (std::size_t r = 0; r < members.size(); ++r) {
      std::snprintf(buf, sizeof buf, "%.12g", rate[members[r]]);
      out << row.community << ':' << (r + 1) << ' ' << buf << ' '
          << g.labels()[members[r]] << '\n';
    }
  }
}

}  // namespace semnet
