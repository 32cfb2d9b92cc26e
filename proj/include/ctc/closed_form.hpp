#pragma once

#include <array>
#include <vector>

#include "ctc/degree_model.hpp"

namespace ctc {

// The five block sums the covariance closed form is assembled from.
struct WTerms {
  double w1 = 0, w2 = 0, w3 = 0, w4 = 0, w5 = 0;
  std::array<double, 5> as_array() const { return {w1, w2, w3, w4, w5}; }
};

struct CovarianceCoefficients {
  double alpha0 = 0;
  double beta1 = 0, beta2 = 0, beta3 = 0, beta4 = 0, beta5 = 0;
  std::array<double, 5> betas() const { return {beta1, beta2, beta3, beta4, beta5}; }
};

// Every expectation over the regular-edge endpoint pair (X, Y) needed by the
// covariance and variance.  g = E[Y|X], f = E[X|Y].
struct ExpectationTable {
  double x = 0;             // E[X]
  double x2 = 0;            // E[X^2]
  double xy = 0;            // E[XY]
  double x2y = 0;           // E[X^2 Y] = E[X Y^2]
  double x_gy = 0;          // E[X g] = E[XY]
  double y_gy = 0;          // E[Y g] = E[g^2]
  double x_gy2 = 0;         // E[X g^2]
  double x2_gy2 = 0;        // E[X^2 g^2]
  double xy_gy = 0;         // E[XY g]
  double gy_fx = 0;         // E[g f]
  double y_gy_fx = 0;       // E[Y g f]
  double xy_gy_fx = 0;      // E[XY g f]
};

// Moments of the transitive-degree variables at the edge ends.
struct TransitiveExpectations {
  double xp = 0;      // E[X']
  double xp_y = 0;    // E[X' Y]
  double xp_yp = 0;   // E[X' Y']
  double x_xp = 0;    // E[X X']
  double xp_sq = 0;   // E[(X')^2]
};

std::vector<int> identity_permutation(int b);
std::vector<int> reversal_permutation(int b);
bool is_involution(const std::vector<int>& h);

// E[Y | X in block i]; u spans the b block second-moment masses.
double conditional_mean_degree(int block, const std::vector<double>& u, double q,
                               const std::vector<int>& h, double mean_degree);

// Probability that two specific vertices are joined by a regular edge, given
// degrees and blocks.  clamped is set when the finite-size value exceeds 1.
struct ConnectionProbability {
  double p = 0;
  bool clamped = false;
};
ConnectionProbability connection_probability(double deg_a, double deg_b, int block_a,
                                             int block_b, double q, int b,
                                             long long m, const std::vector<int>& h);

WTerms w_terms(const std::vector<double>& u, const std::vector<double>& t,
               const std::vector<int>& h);

CovarianceCoefficients covariance_coefficients(double a, double q, int b,
                                               const Moments& moments);

ExpectationTable expectation_table(const BlockPartition& partition, double q,
                                   const std::vector<int>& h);

TransitiveExpectations transitive_expectations(const ExpectationTable& table,
                                               double a);

// Cov(X+X', Y+Y') via alpha0 + sum beta_i W_i.
double covariance_total(const BlockPartition& partition, double a, double q,
                        const std::vector<int>& h);

// The same covariance assembled from the expectation table along the
// four-bracket route; agrees with covariance_total to rounding.
double covariance_assembled(const BlockPartition& partition, double a, double q,
                            const std::vector<int>& h);

// Var(X+X'); throws if the assembled value is negative beyond -1e-9.
double variance_total(const BlockPartition& partition, double a, double q,
                      const std::vector<int>& h);

// rho = Cov / Var; throws when Var <= 0.
double pearson_correlation(const BlockPartition& partition, double a, double q,
                           const std::vector<int>& h);

// Seven-term rearrangement of the covariance (each term nonnegative under
// the identity pairing); sums to covariance_total.
std::array<double, 7> covariance_decomposition(const BlockPartition& partition,
                                             double a, double q,
                                             const std::vector<int>& h);

// Local clustering coefficient of a vertex with k regular and kprime
// transitive edges under closure probability a.
double local_clustering_coefficient(int k, int kprime, double a);

// Full analytic evaluation for one (a, q, h) point.
struct AnalyticReport {
  double a = 0, q = 0;
  int b = 0;
  std::vector<int> h;
  double ez = 0, ez2 = 0, ez3 = 0;
  std::vector<double> u, t;
  bool relaxed_partition = false;
  WTerms w;
  CovarianceCoefficients coef;
  ExpectationTable table;
  TransitiveExpectations trans;
  std::array<double, 7> d{};
  double cov = 0;             // alpha0 + sum beta_i W_i
  double cov_assembled = 0;   // four-bracket route
  double cov_decomposed = 0;  // sum D_i
  double variance = 0;
  double rho = 0;
  bool rho_defined = false;
};

AnalyticReport analyze(const BlockPartition& partition, double a, double q,
                       const std::vector<int>& h);

}  // namespace ctc
