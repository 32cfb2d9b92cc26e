#include "ctc/closed_form.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace ctc {

namespace {

// block sums shared by the table and W terms
struct BlockSums {
  double e1 = 0;    // E[Z]
  double e2 = 0;    // E[Z^2] = sum u_i
  double e3 = 0;    // E[Z^3] = sum t_i
  double s = 0;     // sum u_i u_h(i)
  double p2 = 0;    // sum u_i^2
  double p21 = 0;   // sum u_i^2 u_h(i)
  double p22 = 0;   // sum u_i^2 u_h(i)^2
  double t11 = 0;   // sum t_i u_h(i)
  double t12 = 0;   // sum t_i u_h(i)^2
};

BlockSums block_sums(const std::vector<double>& u, const std::vector<double>& t,
                     const std::vector<int>& h, double mean_degree) {
  if (u.size() != t.size() || u.size() != h.size()) {
    throw std::invalid_argument("closed form: u/t/h length mismatch");
  }
  BlockSums s;
  s.e1 = mean_degree;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = u[i];
    const double uh = u[static_cast<std::size_t>(h[i])];
    const double ti = t[i];
    s.e2 += ui;
    s.e3 += ti;
    s.s += ui * uh;
    s.p2 += ui * ui;
    s.p21 += ui * ui * uh;
    s.p22 += ui * ui * uh * uh;
    s.t11 += ti * uh;
    s.t12 += ti * uh * uh;
  }
  return s;
}

void check_involution(const std::vector<int>& h) {
  if (!is_involution(h)) {
    throw std::invalid_argument("closed form: h is not an involution");
  }
}

}  // namespace

std::vector<int> identity_permutation(int b) {
  std::vector<int> h(static_cast<std::size_t>(b));
  std::iota(h.begin(), h.end(), 0);
  return h;
}

std::vector<int> reversal_permutation(int b) {
  std::vector<int> h(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) h[static_cast<std::size_t>(i)] = b - 1 - i;
  return h;
}

bool is_involution(const std::vector<int>& h) {
  const int b = static_cast<int>(h.size());
  for (int i = 0; i < b; ++i) {
    const int j = h[static_cast<std::size_t>(i)];
    if (j < 0 || j >= b) return false;
    if (h[static_cast<std::size_t>(j)] != i) return false;
  }
  return true;
}

double conditional_mean_degree(int block, const std::vector<double>& u, double q,
                               const std::vector<int>& h, double mean_degree) {
  check_involution(h);
  if (block < 0 || static_cast<std::size_t>(block) >= u.size()) {
    throw std::invalid_argument("conditional_mean_degree: block out of range");
  }
  const double e2 = std::accumulate(u.begin(), u.end(), 0.0);
  const double b = static_cast<double>(u.size());
  const double uh = u[static_cast<std::size_t>(h[static_cast<std::size_t>(block)])];
  return ((1.0 - q) * e2 + q * b * uh) / mean_degree;
}

ConnectionProbability connection_probability(double deg_a, double deg_b, int block_a,
                                             int block_b, double q, int b,
                                             long long m, const std::vector<int>& h) {
  if (m < 1) throw std::invalid_argument("connection_probability: m must be positive");
  check_involution(h);
  const bool matched = h[static_cast<std::size_t>(block_a)] == block_b;
  const double factor = matched ? (1.0 - q + q * static_cast<double>(b)) : (1.0 - q);
  ConnectionProbability result;
  result.p = factor * deg_a * deg_b / (2.0 * static_cast<double>(m));
  if (result.p > 1.0) {
    result.p = 1.0;
    result.clamped = true;
  }
  return result;
}

WTerms w_terms(const std::vector<double>& u, const std::vector<double>& t,
               const std::vector<int>& h) {
  check_involution(h);
  const double b = static_cast<double>(u.size());
  const BlockSums s = block_sums(u, t, h, /*mean_degree=*/1.0);
  WTerms w;
  w.w1 = b * s.s - s.e2 * s.e2;
  w.w2 = b * s.t11 - s.e2 * s.e3;
  w.w3 = b * s.p2 - s.e2 * s.e2;
  w.w4 = b * s.p21 - s.s * s.e2;
  w.w5 = b * s.p22 - s.s * s.s;
  return w;
}

CovarianceCoefficients covariance_coefficients(double a, double q, int b,
                                               const Moments& moments) {
  if (moments.m1 <= 0.0) {
    throw std::invalid_argument("covariance_coefficients: E[Z] must be positive");
  }
  const double e1 = moments.m1, e2 = moments.m2, e3 = moments.m3;
  const double e1_2 = e1 * e1;
  const double e1_3 = e1_2 * e1;
  const double e1_4 = e1_2 * e1_2;
  const double g = e1 * e3 - e2 * e2;  // E[Z]E[Z^3] - (E[Z^2])^2
  CovarianceCoefficients c;
  c.alpha0 = 2.0 * a * (a * (e2 - e1) + e1) / e1_3 * g;
  c.beta1 = q / e1_2 + 2.0 * a * q / e1_2 * ((1.0 - q) * e2 / e1 - 1.0) +
            a * a * q *
                (std::pow((1.0 - q) * e2 + q * e1, 2) - 2.0 * (2.0 - q * q) * e2 * e1) /
                e1_4;
  c.beta2 = 2.0 * a * a * q / e1_2;
  c.beta3 = -2.0 * a * q * q / e1_2 * ((1.0 - a) + a * (1.0 - q) * e2 / e1);
  c.beta4 = 2.0 * a * q * q * static_cast<double>(b) / e1_3 *
            ((1.0 - a) - a * q + a * (1.0 - q) * e2 / e1);
  c.beta5 = a * a * q * q * q * static_cast<double>(b * b) / e1_4;
  return c;
}

ExpectationTable expectation_table(const BlockPartition& partition, double q,
                                   const std::vector<int>& h) {
  check_involution(h);
  const BlockSums s = block_sums(partition.u, partition.t, h, partition.mean_degree());
  const double b = static_cast<double>(partition.num_blocks);
  const double e1 = s.e1, e2 = s.e2, e3 = s.e3;
  const double e1_2 = e1 * e1;
  const double e1_3 = e1_2 * e1;
  const double e1_4 = e1_2 * e1_2;
  const double p = 1.0 - q;

  ExpectationTable tab;
  tab.x = e2 / e1;
  tab.x2 = e3 / e1;
  tab.xy = (p * e2 * e2 + q * b * s.s) / e1_2;
  tab.x2y = (p * e2 * e3 + q * b * s.t11) / e1_2;
  tab.x_gy = tab.xy;
  tab.y_gy = ((1.0 - q * q) * e2 * e2 + q * q * b * s.p2) / e1_2;
  tab.x_gy2 = (p * p * e2 * e2 * e2 + 2.0 * p * q * b * e2 * s.s + q * q * b * b * s.p21) / e1_3;
  tab.xy_gy = tab.x_gy2;
  tab.x2_gy2 = (p * p * e2 * e2 * e3 + 2.0 * p * q * b * e2 * s.t11 + q * q * b * b * s.t12) / e1_3;
  tab.gy_fx = ((1.0 - q * q * q) * e2 * e2 + q * q * q * b * s.s) / e1_2;
  tab.y_gy_fx = ((1.0 + q) * p * p * e2 * e2 * e2 + (1.0 - q * q) * q * b * e2 * s.s +
                 p * q * q * b * e2 * s.p2 + q * q * q * b * b * s.p21) /
                e1_3;
  tab.xy_gy_fx = (p * p * p * e2 * e2 * e2 * e2 + 3.0 * q * b * p * p * e2 * e2 * s.s +
                  q * q * b * b * p * s.s * s.s + 2.0 * q * q * b * b * p * e2 * s.p21 +
                  q * q * q * b * b * b * s.p22) /
                 e1_4;
  return tab;
}

TransitiveExpectations transitive_expectations(const ExpectationTable& t, double a) {
  TransitiveExpectations r;
  r.xp = a * (t.xy - t.x);
  r.xp_y = a * (t.x2 - t.xy + t.xy_gy - t.y_gy);
  r.xp_yp = a * a *
            (-2.0 * t.x2 + 2.0 * t.x2y - 2.0 * t.xy_gy + 2.0 * t.y_gy + t.gy_fx -
             2.0 * t.y_gy_fx + t.xy_gy_fx);
  r.x_xp = a * (t.x2y - t.x2);
  // E[(X')^2] assembled from its three conditional pieces
  const double term1 = a * a * t.y_gy + (a - 3.0 * a * a) * t.x + 2.0 * a * a - a;
  const double term2 =
      2.0 * a * a * (-2.0 * t.xy + 3.0 * t.x + t.xy_gy - t.y_gy - 1.0);
  const double term3 = a * (t.xy - 2.0 * t.x + 1.0) +
                       a * a * (-t.x2y + 3.0 * t.xy - 2.0 * t.x + t.x2_gy2 -
                                3.0 * t.x_gy2 + 2.0 * t.y_gy);
  r.xp_sq = term1 + term2 + term3;
  return r;
}

double covariance_total(const BlockPartition& partition, double a, double q,
                        const std::vector<int>& h) {
  check_involution(h);
  const double e1 = partition.mean_degree();
  const double e2 = partition.second_moment();
  const double e3 = partition.third_moment();
  const CovarianceCoefficients c =
      covariance_coefficients(a, q, partition.num_blocks, {e1, e2, e3});
  const WTerms w = w_terms(partition.u, partition.t, h);
  return c.alpha0 + c.beta1 * w.w1 + c.beta2 * w.w2 + c.beta3 * w.w3 +
         c.beta4 * w.w4 + c.beta5 * w.w5;
}

double covariance_assembled(const BlockPartition& partition, double a, double q,
                            const std::vector<int>& h) {
  const ExpectationTable t = expectation_table(partition, q, h);
  const TransitiveExpectations r = transitive_expectations(t, a);
  // X and Y are exchangeable: E[Y]=E[X], E[Y']=E[X'], E[XY']=E[X'Y]
  return (t.xy - t.x * t.x) + 2.0 * (r.xp_y - r.xp * t.x) + (r.xp_yp - r.xp * r.xp);
}

double variance_total(const BlockPartition& partition, double a, double q,
                      const std::vector<int>& h) {
  const ExpectationTable t = expectation_table(partition, q, h);
  const TransitiveExpectations r = transitive_expectations(t, a);
  const double var = t.x2 - t.x * t.x + 2.0 * (r.x_xp - t.x * r.xp) +
                     (r.xp_sq - r.xp * r.xp);
  if (var < -1e-9) {
    throw std::runtime_error("variance_total: negative variance " + std::to_string(var));
  }
  return var;
}

double pearson_correlation(const BlockPartition& partition, double a, double q,
                           const std::vector<int>& h) {
  const double var = variance_total(partition, a, q, h);
  if (var <= 0.0) {
    throw std::runtime_error("pearson_correlation: variance is not positive");
  }
  return covariance_total(partition, a, q, h) / var;
}

std::array<double, 7> covariance_decomposition(const BlockPartition& partition,
                                             double a, double q,
                                             const std::vector<int>& h) {
  check_involution(h);
  const double e1 = partition.mean_degree();
  const double e2 = partition.second_moment();
  const double e3 = partition.third_moment();
  const double bd = static_cast<double>(partition.num_blocks);
  const double g = e1 * e3 - e2 * e2;
  const double e1_2 = e1 * e1;
  const double e1_3 = e1_2 * e1;
  const double e1_4 = e1_2 * e1_2;
  const WTerms w = w_terms(partition.u, partition.t, h);
  const double z = e1 / bd;

  std::array<double, 7> d{};
  d[0] = q / e1_2 * w.w1;
  d[1] = 2.0 * a * a * e2 / e1_3 * g - 2.0 * a * a * q * e2 / e1_3 * w.w1 +
         2.0 * a * q * (1.0 - q) * e2 / e1_3 * w.w1 -
         2.0 * a * a * q * (1.0 - q) * e2 / e1_3 * w.w1;
  d[2] = 2.0 * a * (1.0 - a) / e1_2 * g + 2.0 * a * a * q / e1_2 * w.w2 -
         2.0 * a * q / e1_2 * w.w1;
  d[3] = a * a * q * (1.0 - q) * (1.0 - q) * e2 * e2 / e1_4 * w.w1;
  d[4] = a * a * q * q * q / e1_2 * w.w1;
  d[5] = 2.0 * a * q * q * bd / e1_3 * ((1.0 - a) + a * (1.0 - q) * e2 / e1) *
         (w.w4 - z * w.w3);
  d[6] = a * a * q * q * q * bd * bd / e1_4 * (w.w5 - 2.0 * z * w.w4);
  return d;
}

double local_clustering_coefficient(int k, int kprime, double a) {
  if (k < 0 || kprime < 0) {
    throw std::invalid_argument("local_clustering_coefficient: negative degree");
  }
  if (k == 0) return 0.0;
  const long long total = static_cast<long long>(k) + kprime;
  if (total <= 1) return 0.0;
  const auto choose2 = [](long long v) -> double {
    return v < 2 ? 0.0 : 0.5 * static_cast<double>(v) * static_cast<double>(v - 1);
  };
  const double numerator = choose2(k) * a + static_cast<double>(kprime) +
                           choose2(kprime) * a / static_cast<double>(k);
  return numerator / choose2(total);
}

AnalyticReport analyze(const BlockPartition& partition, double a, double q,
                       const std::vector<int>& h) {
  AnalyticReport rep;
  rep.a = a;
  rep.q = q;
  rep.b = partition.num_blocks;
  rep.h = h;
  rep.ez = partition.mean_degree();
  rep.ez2 = partition.second_moment();
  rep.ez3 = partition.third_moment();
  rep.u = partition.u;
  rep.t = partition.t;
  rep.relaxed_partition = partition.any_straddle();
  rep.w = w_terms(partition.u, partition.t, h);
  rep.coef = covariance_coefficients(a, q, rep.b, {rep.ez, rep.ez2, rep.ez3});
  rep.table = expectation_table(partition, q, h);
  rep.trans = transitive_expectations(rep.table, a);
  rep.d = covariance_decomposition(partition, a, q, h);
  rep.cov = covariance_total(partition, a, q, h);
  rep.cov_assembled = covariance_assembled(partition, a, q, h);
  rep.cov_decomposed = 0.0;
  for (double di : rep.d) rep.cov_decomposed += di;
  rep.variance = variance_total(partition, a, q, h);
  if (rep.variance > 0.0) {
    rep.rho = rep.cov / rep.variance;
    rep.rho_defined = true;
  }
  return rep;
}

}  // namespace ctc
