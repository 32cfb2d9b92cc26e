#include "ctc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ctc/parallel.hpp"

namespace ctc {

namespace {

struct ReplicaStats {
  double cov = 0;
  double corr = 0;
  bool corr_defined = false;
  double var = 0;
  double mean_transitive = 0;  // over regular edge ends
  double candidate_pairs = 0;
  double eligible_wedges = 0;
  double mixing = 0;
  double fitted_gamma = 0;
  bool fitted_gamma_defined = false;
  std::map<int, long long> histogram;  // total simple degrees
  struct CellSums {
    long long count = 0;
    double sum = 0;
    double sum_sq = 0;
  };
  std::map<std::pair<int, int>, CellSums> cells;
};

ReplicaStats measure_replica(const ModelConfig& config) {
  const CtcGraph graph = generate(config);
  ReplicaStats stats;

  const EdgeCovariance cov = empirical_edge_covariance(graph);
  stats.cov = cov.cov;
  stats.corr = cov.corr;
  stats.corr_defined = cov.corr_defined;

  // endpoint variance and mean transitive degree over regular edge ends
  {
    double sx = 0, sxx = 0, st = 0;
    double count = 0;
    for (const Edge& e : graph.edges) {
      if (e.kind != EdgeKind::Regular) continue;
      for (int v : {e.u, e.v}) {
        const double total = graph.regular_degree[static_cast<std::size_t>(v)] +
                             graph.transitive_degree[static_cast<std::size_t>(v)];
        sx += total;
        sxx += total * total;
        st += graph.transitive_degree[static_cast<std::size_t>(v)];
        count += 1;
      }
    }
    if (count > 0) {
      const double mean = sx / count;
      stats.var = sxx / count - mean * mean;
      stats.mean_transitive = st / count;
    }
  }

  const ClusteringReport clustering = empirical_local_clustering(graph);
  for (const auto& [key, cell] : clustering.cells) {
    auto& acc = stats.cells[key];
    acc.count += cell.count;
    acc.sum += cell.mean * static_cast<double>(cell.count);
    acc.sum_sq += cell.mean_sq * static_cast<double>(cell.count);
  }

  stats.mixing = mixing_parameter(graph).mu;
  {
    std::vector<int> total_degrees;
    const auto both = graph.simple_adjacency(true);
    total_degrees.reserve(both.size());
    for (const auto& nbrs : both) total_degrees.push_back(static_cast<int>(nbrs.size()));
    stats.histogram = degree_histogram(total_degrees);
    try {
      stats.fitted_gamma = fit_power_law(total_degrees).gamma;
      stats.fitted_gamma_defined = true;
    } catch (const std::invalid_argument&) {
      // degenerate degree set, no slope to fit
    }
  }

  // per-pair trials vs wedge instances the asymptotic analysis counts
  const auto adj = graph.simple_adjacency(false);
  stats.candidate_pairs = static_cast<double>(closure_candidate_pairs(adj).size());
  double wedges = 0;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    const auto& nbrs = adj[v];
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const auto& nx = adj[static_cast<std::size_t>(nbrs[i])];
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        if (!std::binary_search(nx.begin(), nx.end(), nbrs[j])) wedges += 1;
      }
    }
  }
  stats.eligible_wedges = wedges;
  return stats;
}

VerifyQuantity summarize(const std::string& name, double analytic,
                         const std::vector<double>& values) {
  VerifyQuantity q;
  q.name = name;
  q.analytic = analytic;
  const double n = static_cast<double>(values.size());
  double sum = 0;
  for (double v : values) sum += v;
  q.empirical_mean = sum / n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - q.empirical_mean) * (v - q.empirical_mean);
    q.stderr_mean = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  q.z = q.stderr_mean > 0 ? (q.empirical_mean - analytic) / q.stderr_mean : 0.0;
  return q;
}

}  // namespace

VerifyReport run_verification(const ModelConfig& config,
                              const BlockPartition& analysis,
                              const VerifyOptions& options) {
  if (options.reps < 1) {
    throw std::invalid_argument("verify: reps must be positive");
  }
  if (config.community_sizes.size() != 1 || config.r != 1.0) {
    throw std::invalid_argument("verify: closed forms require c=1 and r=1");
  }

  const std::vector<int> h = config.permutation();
  const AnalyticReport analytic = analyze(analysis, config.a, config.q, h);

  std::vector<ReplicaStats> replicas(static_cast<std::size_t>(options.reps));
  parallel_for(static_cast<std::size_t>(options.reps), [&](std::size_t rep) {
    ModelConfig replica = config;
    replica.seed = config.seed + rep;
    replicas[rep] = measure_replica(replica);
  }, options.threads);

  VerifyReport report;
  report.reps = options.reps;

  const auto collect = [&](auto getter) {
    std::vector<double> values;
    values.reserve(replicas.size());
    for (const auto& r : replicas) values.push_back(getter(r));
    return values;
  };

  report.quantities.push_back(summarize(
      "cov(X+X',Y+Y')", analytic.cov, collect([](const ReplicaStats& r) { return r.cov; })));
  report.quantities.push_back(summarize(
      "var(X+X')", analytic.variance, collect([](const ReplicaStats& r) { return r.var; })));
  if (analytic.rho_defined) {
    report.quantities.push_back(summarize(
        "rho(X+X',Y+Y')", analytic.rho,
        collect([](const ReplicaStats& r) { return r.corr; })));
  }
  report.quantities.push_back(summarize(
      "E[X']", analytic.trans.xp,
      collect([](const ReplicaStats& r) { return r.mean_transitive; })));

  report.mean_candidate_pairs =
      summarize("candidates", 0,
                collect([](const ReplicaStats& r) { return r.candidate_pairs; }))
          .empirical_mean;
  report.mean_eligible_wedges =
      summarize("wedges", 0,
                collect([](const ReplicaStats& r) { return r.eligible_wedges; }))
          .empirical_mean;

  const VerifyQuantity mixing = summarize(
      "mixing", 0, collect([](const ReplicaStats& r) { return r.mixing; }));
  report.mean_mixing = mixing.empirical_mean;
  report.stderr_mixing = mixing.stderr_mean;

  std::vector<double> gammas;
  for (const auto& r : replicas) {
    if (r.fitted_gamma_defined) gammas.push_back(r.fitted_gamma);
  }
  if (!gammas.empty()) {
    const VerifyQuantity fitted = summarize("gamma", 0, gammas);
    report.mean_fitted_gamma = fitted.empirical_mean;
    report.stderr_fitted_gamma = fitted.stderr_mean;
    report.fitted_gamma_defined = true;
  }
  for (const auto& r : replicas) {
    for (const auto& [k, count] : r.histogram) {
      report.total_degree_histogram[k] += count;
    }
  }

  // pool clustering cells across replicas
  std::map<std::pair<int, int>, ReplicaStats::CellSums> pooled;
  for (const auto& r : replicas) {
    for (const auto& [key, acc] : r.cells) {
      pooled[key].count += acc.count;
      pooled[key].sum += acc.sum;
      pooled[key].sum_sq += acc.sum_sq;
    }
  }
  for (const auto& [key, acc] : pooled) {
    if (acc.count < options.min_cell_samples) continue;
    ClusteringComparison cell;
    cell.k = key.first;
    cell.kprime = key.second;
    cell.samples = acc.count;
    const double n = static_cast<double>(acc.count);
    cell.empirical = acc.sum / n;
    if (acc.count > 1) {
      const double var = std::max(0.0, (acc.sum_sq - acc.sum * acc.sum / n) / (n - 1.0));
      cell.stderr_mean = std::sqrt(var / n);
    }
    cell.predicted = local_clustering_coefficient(cell.k, cell.kprime, config.a);
    report.clustering.push_back(cell);
    report.max_clustering_deviation =
        std::max(report.max_clustering_deviation,
                 std::abs(cell.empirical - cell.predicted));
  }
  return report;
}

}  // namespace ctc
