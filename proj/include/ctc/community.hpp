#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctc/generator.hpp"

namespace ctc {

// Newman modularity (resolution 1) of a partition of an unweighted simple
// graph given as sorted adjacency lists.
double modularity(const std::vector<std::vector<int>>& adj,
                  const std::vector<int>& partition);

// Greedy modularity optimization: local-move passes in seeded random order,
// then aggregation, repeated until the gain drops below 1e-7.  Isolated
// vertices end up as singletons.  The per-phase modularity values are
// appended to trace when given (non-decreasing by construction).
std::vector<int> fast_unfolding(const std::vector<std::vector<int>>& adj,
                                std::uint64_t seed,
                                std::vector<double>* trace = nullptr);

// Asynchronous label propagation, seeded order, uniform random tie breaks,
// at most 100 sweeps.
std::vector<int> label_propagation(const std::vector<std::vector<int>>& adj,
                                   std::uint64_t seed);

struct BenchCell {
  double param_value = 0;
  std::vector<double> nmi_values;
  double mean_nmi = 0;
  double stderr_nmi = 0;
  bool stderr_defined = false;
};

struct BenchReport {
  std::string param;
  std::string detector;
  int reps = 0;
  std::uint64_t base_seed = 0;
  std::string config_digest;  // set by callers that know the config source
  std::vector<BenchCell> cells;
};

// For each grid value of `param` (one of r, a, q): generate `reps` graphs
// with derived seeds, detect communities on the simple projection including
// transitive edges, and score NMI against the planted labels.
BenchReport run_benchmark(const ModelConfig& base, const std::string& param,
                          const std::vector<double>& grid, int reps,
                          const std::string& detector, std::uint64_t seed);

}  // namespace ctc
