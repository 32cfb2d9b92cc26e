#pragma once

#include <map>
#include <vector>

#include "ctc/generator.hpp"

namespace ctc {

// Sample covariance / correlation of endpoint degrees over regular edges
// (both orientations).  Total degree = regular + transitive; the regular-only
// variant is reported alongside.  corr is undefined on zero variance.
struct EdgeCovariance {
  double cov = 0;
  double corr = 0;
  bool corr_defined = false;
  double stderr_cov = 0;
  double cov_regular = 0;
  double corr_regular = 0;
  bool corr_regular_defined = false;
  long long edge_count = 0;
};
EdgeCovariance empirical_edge_covariance(const CtcGraph& graph);

struct ClusteringCell {
  long long count = 0;
  double mean = 0;
  double mean_sq = 0;  // mean of squared coefficients, for pooled variance
};

struct ClusteringReport {
  // keyed by (regular simple degree, transitive degree)
  std::map<std::pair<int, int>, ClusteringCell> cells;
  double overall_mean = 0;      // over vertices with >= 2 neighbors
  long long vertices_counted = 0;
};
ClusteringReport empirical_local_clustering(const CtcGraph& graph);

struct MixingReport {
  double mu = 0;
  long long inter_edges = 0;
  long long total_edges = 0;
  std::map<int, double> per_community;
};
// Fraction of simple-projection edges (both kinds) joining distinct
// communities, per the graph's ground-truth labels or an explicit partition.
MixingReport mixing_parameter(const CtcGraph& graph);
MixingReport mixing_parameter(const CtcGraph& graph, const std::vector<int>& partition);

struct PowerLawFit {
  double gamma = 0;
  int kmin = 0;
  int kmax = 0;
  bool low_confidence = false;
};
// Discrete MLE with kmin fixed at the smallest positive degree observed;
// truncated-zeta likelihood maximized by grid search plus refinement.
PowerLawFit fit_power_law(const std::vector<int>& degrees);

// Normalized mutual information 2 I / (H1 + H2); 1 when both partitions are
// deterministic, 0 when exactly one is.
double nmi(const std::vector<int>& p1, const std::vector<int>& p2);

std::map<int, long long> degree_histogram(const std::vector<int>& degrees);

}  // namespace ctc
