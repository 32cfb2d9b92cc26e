#pragma once

#include <map>
#include <string>
#include <vector>

#include "ctc/closed_form.hpp"
#include "ctc/empirical.hpp"
#include "ctc/generator.hpp"

namespace ctc {

struct VerifyQuantity {
  std::string name;
  double analytic = 0;
  double empirical_mean = 0;
  double stderr_mean = 0;   // across replicas
  double z = 0;             // (empirical - analytic) / stderr
};

struct ClusteringComparison {
  int k = 0;
  int kprime = 0;
  long long samples = 0;
  double empirical = 0;
  double stderr_mean = 0;
  double predicted = 0;
};

struct VerifyReport {
  int reps = 0;
  std::vector<VerifyQuantity> quantities;
  std::vector<ClusteringComparison> clustering;  // cells pooled across replicas
  double max_clustering_deviation = 0;           // over reported cells
  // per-pair closure trials vs the wedge count the analysis assumes
  double mean_candidate_pairs = 0;
  double mean_eligible_wedges = 0;
  // whole-graph measurements, mean +- SE across replicas
  double mean_mixing = 0;
  double stderr_mixing = 0;
  double mean_fitted_gamma = 0;
  double stderr_fitted_gamma = 0;
  bool fitted_gamma_defined = false;
  std::map<int, long long> total_degree_histogram;  // pooled over replicas
};

struct VerifyOptions {
  int reps = 50;
  long long min_cell_samples = 100;
  unsigned threads = 0;
};

// Generates `reps` replicas with derived seeds, measures covariance /
// correlation / variance / mean transitive degree / grouped clustering, and
// compares against the closed forms evaluated on `analysis` (a relaxed or
// strict pmf partition).  The model must be the single-community r=1 case the
// closed forms are derived for.
VerifyReport run_verification(const ModelConfig& config,
                              const BlockPartition& analysis,
                              const VerifyOptions& options);

}  // namespace ctc
