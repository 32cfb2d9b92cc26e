#include "ctc/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ctc {

EdgeCovariance empirical_edge_covariance(const CtcGraph& graph) {
  std::vector<const Edge*> regular;
  for (const Edge& e : graph.edges) {
    if (e.kind == EdgeKind::Regular) regular.push_back(&e);
  }
  if (regular.empty()) {
    throw std::runtime_error("empirical_edge_covariance: no regular edges");
  }

  const auto run = [&](const std::vector<int>& degree, double& cov, double& corr,
                       bool& defined) {
    double sx = 0, sxx = 0, sxy = 0;
    const double count = 2.0 * static_cast<double>(regular.size());
    for (const Edge* e : regular) {
      const double du = degree[static_cast<std::size_t>(e->u)];
      const double dv = degree[static_cast<std::size_t>(e->v)];
      sx += du + dv;
      sxx += du * du + dv * dv;
      sxy += 2.0 * du * dv;
    }
    const double mean = sx / count;
    const double var = sxx / count - mean * mean;
    cov = sxy / count - mean * mean;
    if (var > 0.0) {
      corr = cov / var;
      defined = true;
    } else {
      corr = 0.0;
      defined = false;
    }
    return mean;
  };

  std::vector<int> total(static_cast<std::size_t>(graph.n));
  for (int v = 0; v < graph.n; ++v) {
    total[static_cast<std::size_t>(v)] = graph.regular_degree[static_cast<std::size_t>(v)] +
                                         graph.transitive_degree[static_cast<std::size_t>(v)];
  }

  EdgeCovariance result;
  result.edge_count = static_cast<long long>(regular.size());
  const double mean = run(total, result.cov, result.corr, result.corr_defined);
  run(graph.regular_degree, result.cov_regular, result.corr_regular,
      result.corr_regular_defined);

  // spread of the per-edge symmetric products around the covariance
  double ss = 0;
  for (const Edge* e : regular) {
    const double du = total[static_cast<std::size_t>(e->u)] - mean;
    const double dv = total[static_cast<std::size_t>(e->v)] - mean;
    const double contribution = du * dv;
    ss += (contribution - result.cov) * (contribution - result.cov);
  }
  if (regular.size() > 1) {
    result.stderr_cov = std::sqrt(ss / static_cast<double>(regular.size() - 1)) /
                        std::sqrt(static_cast<double>(regular.size()));
  }
  return result;
}

ClusteringReport empirical_local_clustering(const CtcGraph& graph) {
  const auto adj = graph.simple_adjacency(true);
  const auto regular_adj = graph.simple_adjacency(false);

  ClusteringReport report;
  double sum = 0;
  std::vector<char> mark(static_cast<std::size_t>(graph.n), 0);
  for (int v = 0; v < graph.n; ++v) {
    const auto& nbrs = adj[static_cast<std::size_t>(v)];
    const int deg = static_cast<int>(nbrs.size());
    if (deg < 2) continue;
    for (int u : nbrs) mark[static_cast<std::size_t>(u)] = 1;
    long long links = 0;
    for (int u : nbrs) {
      for (int w : adj[static_cast<std::size_t>(u)]) {
        if (w > u && mark[static_cast<std::size_t>(w)]) ++links;
      }
    }
    for (int u : nbrs) mark[static_cast<std::size_t>(u)] = 0;

    const double pairs = 0.5 * static_cast<double>(deg) * (deg - 1);
    const double cc = static_cast<double>(links) / pairs;
    sum += cc;
    ++report.vertices_counted;

    const int k_regular = static_cast<int>(regular_adj[static_cast<std::size_t>(v)].size());
    const int k_transitive = graph.transitive_degree[static_cast<std::size_t>(v)];
    auto& cell = report.cells[{k_regular, k_transitive}];
    cell.mean += cc;
    cell.mean_sq += cc * cc;
    cell.count += 1;
  }
  for (auto& [key, cell] : report.cells) {
    cell.mean /= static_cast<double>(cell.count);
    cell.mean_sq /= static_cast<double>(cell.count);
  }
  report.overall_mean = report.vertices_counted > 0
                            ? sum / static_cast<double>(report.vertices_counted)
                            : 0.0;
  return report;
}

MixingReport mixing_parameter(const CtcGraph& graph) {
  return mixing_parameter(graph, graph.community);
}

MixingReport mixing_parameter(const CtcGraph& graph, const std::vector<int>& partition) {
  if (static_cast<int>(partition.size()) != graph.n) {
    throw std::invalid_argument("mixing_parameter: partition size mismatch");
  }
  const auto adj = graph.simple_adjacency(true);
  MixingReport report;
  std::map<int, std::pair<long long, long long>> per;  // community -> (inter, incident)
  for (int v = 0; v < graph.n; ++v) {
    for (int u : adj[static_cast<std::size_t>(v)]) {
      if (u <= v) continue;
      ++report.total_edges;
      const int cv = partition[static_cast<std::size_t>(v)];
      const int cu = partition[static_cast<std::size_t>(u)];
      const bool inter = cv != cu;
      if (inter) ++report.inter_edges;
      per[cv].second += 1;
      if (cu != cv) per[cu].second += 1;
      if (inter) {
        per[cv].first += 1;
        per[cu].first += 1;
      }
    }
  }
  report.mu = report.total_edges > 0
                  ? static_cast<double>(report.inter_edges) / static_cast<double>(report.total_edges)
                  : 0.0;
  for (const auto& [community, counts] : per) {
    report.per_community[community] =
        counts.second > 0 ? static_cast<double>(counts.first) / static_cast<double>(counts.second)
                          : 0.0;
  }
  return report;
}

namespace {

// negative log-likelihood of the zeta pmf truncated to [kmin, kmax]
double truncated_zeta_nll(double gamma, double log_sum, long long n, int kmin, int kmax) {
  double norm = 0;
  for (int k = kmin; k <= kmax; ++k) {
    norm += std::pow(static_cast<double>(k), -gamma);
  }
  return gamma * log_sum + static_cast<double>(n) * std::log(norm);
}

}  // namespace

PowerLawFit fit_power_law(const std::vector<int>& degrees) {
  std::vector<int> positive;
  for (int k : degrees) {
    if (k > 0) positive.push_back(k);
  }
  if (positive.empty()) throw std::invalid_argument("fit_power_law: no positive degrees");

  PowerLawFit fit;
  fit.kmin = *std::min_element(positive.begin(), positive.end());
  fit.kmax = *std::max_element(positive.begin(), positive.end());
  if (fit.kmin == fit.kmax) {
    throw std::invalid_argument("fit_power_law: all degrees equal, no slope to fit");
  }

  double log_sum = 0;
  std::size_t distinct = 0;
  {
    std::vector<int> sorted = positive;
    std::sort(sorted.begin(), sorted.end());
    distinct = static_cast<std::size_t>(
        std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  }
  for (int k : positive) log_sum += std::log(static_cast<double>(k));
  const long long n = static_cast<long long>(positive.size());

  // coarse grid, then golden-section refinement around the best cell
  const double lo = 1.0001, hi = 10.0;
  double best = lo, best_nll = truncated_zeta_nll(lo, log_sum, n, fit.kmin, fit.kmax);
  for (double g = lo + 0.1; g <= hi; g += 0.1) {
    const double nll = truncated_zeta_nll(g, log_sum, n, fit.kmin, fit.kmax);
    if (nll < best_nll) {
      best_nll = nll;
      best = g;
    }
  }
  double a = std::max(lo, best - 0.1), b = std::min(hi, best + 0.1);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = truncated_zeta_nll(x1, log_sum, n, fit.kmin, fit.kmax);
  double f2 = truncated_zeta_nll(x2, log_sum, n, fit.kmin, fit.kmax);
  while (b - a > 1e-7) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = truncated_zeta_nll(x1, log_sum, n, fit.kmin, fit.kmax);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = truncated_zeta_nll(x2, log_sum, n, fit.kmin, fit.kmax);
    }
  }
  fit.gamma = 0.5 * (a + b);
  fit.low_confidence = positive.size() < 100 || distinct < 3;
  return fit;
}

double nmi(const std::vector<int>& p1, const std::vector<int>& p2) {
  if (p1.size() != p2.size()) {
    throw std::invalid_argument("nmi: partitions cover different vertex sets");
  }
  if (p1.empty()) throw std::invalid_argument("nmi: empty partitions");
  const double n = static_cast<double>(p1.size());

  std::map<std::pair<int, int>, long long> joint;
  std::map<int, long long> left, right;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    joint[{p1[i], p2[i]}] += 1;
    left[p1[i]] += 1;
    right[p2[i]] += 1;
  }

  const auto entropy = [n](const std::map<int, long long>& counts) {
    double h = 0;
    for (const auto& [label, count] : counts) {
      const double p = static_cast<double>(count) / n;
      h -= p * std::log(p);
    }
    return h;
  };
  const double h1 = entropy(left);
  const double h2 = entropy(right);
  if (h1 == 0.0 && h2 == 0.0) return 1.0;
  if (h1 == 0.0 || h2 == 0.0) return 0.0;

  double mi = 0;
  for (const auto& [labels, count] : joint) {
    const double pxy = static_cast<double>(count) / n;
    const double px = static_cast<double>(left[labels.first]) / n;
    const double py = static_cast<double>(right[labels.second]) / n;
    mi += pxy * std::log(pxy / (px * py));
  }
  const double value = 2.0 * mi / (h1 + h2);
  return std::clamp(value, 0.0, 1.0);
}

std::map<int, long long> degree_histogram(const std::vector<int>& degrees) {
  std::map<int, long long> histogram;
  for (int k : degrees) histogram[k] += 1;
  return histogram;
}

}  // namespace ctc
