#include "ctc/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "ctc/empirical.hpp"
#include "ctc/parallel.hpp"

namespace ctc {

namespace {

// weighted graph used across aggregation levels; community ids stay dense in
// [0, size) so bookkeeping can use plain vectors
struct WeightedGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
  std::vector<double> self_weight;                       // internal loop weight
  std::vector<double> strength;                          // k_v incl. 2*self
  double total_strength = 0;                             // 2W

  static WeightedGraph from_simple(const std::vector<std::vector<int>>& simple) {
    WeightedGraph g;
    g.adj.resize(simple.size());
    g.self_weight.assign(simple.size(), 0.0);
    g.strength.assign(simple.size(), 0.0);
    for (std::size_t v = 0; v < simple.size(); ++v) {
      for (int u : simple[v]) {
        g.adj[v].emplace_back(u, 1.0);
      }
      g.strength[v] = static_cast<double>(simple[v].size());
      g.total_strength += g.strength[v];
    }
    return g;
  }

  std::size_t size() const { return adj.size(); }
};

double modularity_weighted(const WeightedGraph& g, const std::vector<int>& community) {
  if (g.total_strength <= 0.0) return 0.0;
  std::vector<double> internal(g.size(), 0.0), total(g.size(), 0.0);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto cv = static_cast<std::size_t>(community[v]);
    total[cv] += g.strength[v];
    internal[cv] += 2.0 * g.self_weight[v];
    for (const auto& [u, w] : g.adj[v]) {
      if (community[static_cast<std::size_t>(u)] == community[v]) internal[cv] += w;
    }
  }
  const double m2 = g.total_strength;
  double q = 0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (total[c] > 0.0 || internal[c] > 0.0) {
      q += internal[c] / m2 - (total[c] / m2) * (total[c] / m2);
    }
  }
  return q;
}

// local moves until stable; returns whether anything moved at all
bool local_move_phase(const WeightedGraph& g, std::vector<int>& community, Rng& rng) {
  const std::size_t n = g.size();
  std::vector<double> community_total(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    community_total[static_cast<std::size_t>(community[v])] += g.strength[v];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  const double m2 = g.total_strength;
  std::vector<double> weight_to(n, 0.0);
  std::vector<int> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t v : order) {
      const int old_community = community[v];
      touched.clear();
      for (const auto& [u, w] : g.adj[v]) {
        const int c = community[static_cast<std::size_t>(u)];
        if (weight_to[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        weight_to[static_cast<std::size_t>(c)] += w;
      }
      community_total[static_cast<std::size_t>(old_community)] -= g.strength[v];

      // gain of joining c, up to the common positive factor 2/m2
      const auto gain = [&](int c) {
        return weight_to[static_cast<std::size_t>(c)] -
               g.strength[v] * community_total[static_cast<std::size_t>(c)] / m2;
      };
      std::sort(touched.begin(), touched.end());
      int best = old_community;
      double best_gain = gain(old_community);
      for (int c : touched) {
        if (c == old_community) continue;
        const double candidate = gain(c);
        if (candidate > best_gain + 1e-12) {
          best_gain = candidate;
          best = c;
        }
      }
      community_total[static_cast<std::size_t>(best)] += g.strength[v];
      for (int c : touched) weight_to[static_cast<std::size_t>(c)] = 0.0;
      if (best != old_community) {
        community[v] = best;
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

// collapse communities into supernodes; dense[v] gives the supernode of
// level node v, ids assigned in first-occurrence order
WeightedGraph aggregate(const WeightedGraph& g, const std::vector<int>& community,
                        std::vector<int>& dense) {
  std::vector<int> relabel(g.size(), -1);
  dense.assign(g.size(), -1);
  int next = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    int& id = relabel[static_cast<std::size_t>(community[v])];
    if (id == -1) id = next++;
    dense[v] = id;
  }

  WeightedGraph out;
  out.adj.resize(static_cast<std::size_t>(next));
  out.self_weight.assign(static_cast<std::size_t>(next), 0.0);
  out.strength.assign(static_cast<std::size_t>(next), 0.0);
  std::vector<std::unordered_map<int, double>> weights(static_cast<std::size_t>(next));
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto cv = static_cast<std::size_t>(dense[v]);
    out.self_weight[cv] += g.self_weight[v];
    for (const auto& [u, w] : g.adj[v]) {
      const int cu = dense[static_cast<std::size_t>(u)];
      if (static_cast<std::size_t>(cu) == cv) {
        out.self_weight[cv] += 0.5 * w;  // both endpoints visit the edge
      } else {
        weights[cv][cu] += w;
      }
    }
  }
  for (std::size_t c = 0; c < weights.size(); ++c) {
    out.adj[c].assign(weights[c].begin(), weights[c].end());
    std::sort(out.adj[c].begin(), out.adj[c].end());
    double s = 2.0 * out.self_weight[c];
    for (const auto& [u, w] : out.adj[c]) {
      (void)u;
      s += w;
    }
    out.strength[c] = s;
    out.total_strength += s;
  }
  return out;
}

std::vector<int> canonical_labels(const std::vector<int>& partition) {
  std::unordered_map<int, int> map;
  std::vector<int> out(partition.size());
  int next = 0;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    auto [it, inserted] = map.try_emplace(partition[i], next);
    if (inserted) ++next;
    out[i] = it->second;
  }
  return out;
}

}  // namespace

double modularity(const std::vector<std::vector<int>>& adj,
                  const std::vector<int>& partition) {
  if (adj.size() != partition.size()) {
    throw std::invalid_argument("modularity: partition size mismatch");
  }
  return modularity_weighted(WeightedGraph::from_simple(adj), partition);
}

std::vector<int> fast_unfolding(const std::vector<std::vector<int>>& adj,
                                std::uint64_t seed, std::vector<double>* trace) {
  const std::size_t n = adj.size();
  if (n == 0) throw std::invalid_argument("fast_unfolding: empty graph");
  Rng rng(seed);

  WeightedGraph level = WeightedGraph::from_simple(adj);
  std::vector<int> assignment(n);
  std::iota(assignment.begin(), assignment.end(), 0);

  if (level.total_strength <= 0.0) {
    if (trace) trace->push_back(0.0);
    return assignment;  // edgeless: all singletons
  }

  double q_prev = modularity_weighted(level, assignment);
  if (trace) trace->push_back(q_prev);

  while (true) {
    std::vector<int> community(level.size());
    std::iota(community.begin(), community.end(), 0);
    const bool moved = local_move_phase(level, community, rng);
    if (!moved) break;

    const double q_new = modularity_weighted(level, community);
    if (trace) trace->push_back(q_new);

    std::vector<int> dense;
    WeightedGraph next = aggregate(level, community, dense);
    for (std::size_t v = 0; v < n; ++v) {
      assignment[v] = dense[static_cast<std::size_t>(assignment[v])];
    }
    if (q_new - q_prev < 1e-7) break;
    q_prev = q_new;
    level = std::move(next);
  }
  return canonical_labels(assignment);
}

std::vector<int> label_propagation(const std::vector<std::vector<int>>& adj,
                                   std::uint64_t seed) {
  const std::size_t n = adj.size();
  if (n == 0) throw std::invalid_argument("label_propagation: empty graph");
  Rng rng(seed);
  std::vector<int> label(n);
  std::iota(label.begin(), label.end(), 0);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<int> counts(n, 0);
  std::vector<int> seen, best_labels;
  for (int sweep = 0; sweep < 100; ++sweep) {
    rng.shuffle(order);
    bool changed = false;
    for (std::size_t v : order) {
      if (adj[v].empty()) continue;
      seen.clear();
      int best = 0;
      for (int u : adj[v]) {
        const int l = label[static_cast<std::size_t>(u)];
        if (counts[static_cast<std::size_t>(l)] == 0) seen.push_back(l);
        best = std::max(best, ++counts[static_cast<std::size_t>(l)]);
      }
      best_labels.clear();
      for (int l : seen) {
        if (counts[static_cast<std::size_t>(l)] == best) best_labels.push_back(l);
      }
      for (int l : seen) counts[static_cast<std::size_t>(l)] = 0;
      std::sort(best_labels.begin(), best_labels.end());
      const int chosen = best_labels[rng.index(best_labels.size())];
      if (chosen != label[v]) {
        label[v] = chosen;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return canonical_labels(label);
}

BenchReport run_benchmark(const ModelConfig& base, const std::string& param,
                          const std::vector<double>& grid, int reps,
                          const std::string& detector, std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("benchmark: empty parameter grid");
  if (reps < 1) throw std::invalid_argument("benchmark: reps must be positive");
  if (detector != "fast_unfolding" && detector != "label_propagation") {
    throw std::invalid_argument("benchmark: unknown detector '" + detector +
                                "' (available: fast_unfolding, label_propagation)");
  }

  BenchReport report;
  report.param = param;
  report.detector = detector;
  report.reps = reps;
  report.base_seed = seed;
  report.cells.resize(grid.size());
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    report.cells[cell].param_value = grid[cell];
    report.cells[cell].nmi_values.resize(static_cast<std::size_t>(reps));
  }
  if (param != "r" && param != "a" && param != "q") {
    throw std::invalid_argument("benchmark: sweep parameter must be r, a or q");
  }

  // replicas are independent given their derived seeds
  const std::size_t jobs = grid.size() * static_cast<std::size_t>(reps);
  parallel_for(jobs, [&](std::size_t job) {
    const std::size_t cell = job / static_cast<std::size_t>(reps);
    const int rep = static_cast<int>(job % static_cast<std::size_t>(reps));
    ModelConfig config = base;
    if (param == "r") {
      config.r = grid[cell];
    } else if (param == "a") {
      config.a = grid[cell];
    } else {
      config.q = grid[cell];
    }
    const std::uint64_t replica = seed + static_cast<std::uint64_t>(job);
    config.seed = replica;
    const CtcGraph graph = generate(config);
    const auto adj = graph.simple_adjacency(true);
    const std::uint64_t detector_seed = Rng::derive(replica, 1);
    const std::vector<int> detected = detector == "fast_unfolding"
                                          ? fast_unfolding(adj, detector_seed)
                                          : label_propagation(adj, detector_seed);
    report.cells[cell].nmi_values[static_cast<std::size_t>(rep)] =
        nmi(graph.community, detected);
  });

  for (BenchCell& out : report.cells) {
    double sum = 0;
    for (double v : out.nmi_values) sum += v;
    out.mean_nmi = sum / static_cast<double>(reps);
    if (reps > 1) {
      double ss = 0;
      for (double v : out.nmi_values) ss += (v - out.mean_nmi) * (v - out.mean_nmi);
      out.stderr_nmi = std::sqrt(ss / static_cast<double>(reps - 1)) /
                       std::sqrt(static_cast<double>(reps));
      out.stderr_defined = true;
    }
  }
  return report;
}

}  // namespace ctc
