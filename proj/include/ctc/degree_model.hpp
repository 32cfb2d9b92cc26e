#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctc/rng.hpp"

namespace ctc {

// Raised when a strict block partition would require some degree's stubs to
// straddle a block boundary (the even-block requirement cannot be met).
class assumption_violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Degree pmf with its first three raw moments.
struct DegreeDistribution {
  std::map<int, double> probabilities;  // degree k -> p_k
  double moment1 = 0.0;                 // E[Z]
  double moment2 = 0.0;                 // E[Z^2]
  double moment3 = 0.0;                 // E[Z^3]

  // Validates (sum 1 within 1e-12, p_k >= 0, k >= 0) and fills moments.
  static DegreeDistribution from_pmf(std::map<int, double> probabilities);

  // Truncated discrete power law p_k proportional to k^-gamma on [kmin, kmax].
  static DegreeDistribution power_law(double gamma, int kmin, int kmax);

  double mean_degree() const { return moment1; }
};

// Per-community degree lists.
struct DegreeSequence {
  std::vector<std::vector<int>> communities;

  int vertex_count() const;
  long long stub_count(std::size_t community) const;  // 2 m_i
  long long stub_count() const;                       // 2 m
  std::vector<int> flattened() const;
};

// Empirical pmf of a pooled degree sequence: p_k = count(k) / n.
DegreeDistribution pmf_from_sequence(const std::vector<int>& degrees);
DegreeDistribution pmf_from_sequence(const DegreeSequence& sequence);

// (E[Z], E[Z^2], E[Z^3])
struct Moments {
  double m1, m2, m3;
};
Moments distribution_moments(const DegreeDistribution& dist);

// i.i.d. truncated power-law degrees for one community.  If the sum is odd,
// one uniformly chosen vertex's degree is incremented (parity repair).
std::vector<int> sample_power_law_degrees(int n, double gamma, int kmin,
                                          int kmax, Rng& rng);
DegreeSequence sample_power_law_sequence(const std::vector<int>& community_sizes,
                                         double gamma, int kmin, int kmax,
                                         Rng& rng);

// One stub of a degree-k vertex (slot in [0, k)).
struct Stub {
  int vertex;
  int slot;
};

// Ascending degree-sorted stubs of one community divided into b blocks, plus
// the block moments the closed forms consume.  Built either at stub level
// from a sampled sequence, or from exact pmf masses (blocks then empty).
struct BlockPartition {
  int num_blocks = 0;
  bool strict = false;
  double block_stub_mass = 0.0;          // E[Z]/b
  std::vector<double> u;                 // sum_{k in H_i} k^2 p_k
  std::vector<double> t;                 // sum_{k in H_i} k^3 p_k
  std::vector<std::vector<int>> degree_sets;  // H_i; a straddling degree appears in both
  std::vector<bool> straddle;            // boundary i|i+1 straddled by one degree
  std::vector<std::vector<Stub>> blocks; // stub-level blocks (empty for pmf builds)

  bool any_straddle() const;
  double mean_degree() const { return block_stub_mass * num_blocks; }
  double second_moment() const;          // sum u_i
  double third_moment() const;           // sum t_i
};

// Stub-level split of one community's degrees into b contiguous chunks of
// equal size (+-1).  strict: requires divisibility and no degree straddling a
// boundary; relaxed: straddles permitted and flagged, u/t from per-block stub
// masses.
BlockPartition partition_into_blocks(const std::vector<int>& degrees, int b,
                                     bool strict);

// Exact-mass split of a pmf into b blocks of stub mass E[Z]/b each.  strict:
// every degree's whole mass must fall in one block; relaxed: a straddling
// degree's mass is divided fractionally so the even-block identity holds
// exactly.
BlockPartition partition_pmf(const DegreeDistribution& dist, int b, bool strict);

// u_i / t_i recomputed from the degree sets and the pmf (strict partitions);
// relaxed partitions return their stored stub-mass moments.
std::pair<std::vector<double>, std::vector<double>> block_moments(
    const BlockPartition& partition, const DegreeDistribution& dist);

}  // namespace ctc
