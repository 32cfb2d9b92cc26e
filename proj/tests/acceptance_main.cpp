// Acceptance suite: prints one pass/fail line per criterion and exits with
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ctc/closed_form.hpp"
#include "ctc/community.hpp"
#include "ctc/degree_model.hpp"
#include "ctc/empirical.hpp"
#include "ctc/generator.hpp"
#include "ctc/io.hpp"
#include "ctc/verify.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace ctc;
using namespace ctc::testing;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool condition, const std::string& message) {
    if (!condition) {
      ok = false;
      if (detail.tellp() < 2000) detail << "\n    " << message;
    }
  }
};

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double elapsed_s(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------- criterion 1
Check criterion1_decomposition_suite() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20240601);
  const double slack = 1e-9;
  for (int trial = 0; trial < 200; ++trial) {
    const int b = 2 + trial % 3;
    const auto dist = make_random_strict_pmf(rng, b);
    const auto part = partition_pmf(dist, b, true);
    const auto h = identity_permutation(b);
    const double z = part.block_stub_mass;
    const double g = dist.moment1 * dist.moment3 - dist.moment2 * dist.moment2;
    const auto w = w_terms(part.u, part.t, h);

    check.expect(w.w1 >= -slack, "W1 < 0 at trial " + std::to_string(trial));
    check.expect(w.w2 >= -slack, "W2 < 0 at trial " + std::to_string(trial));
    check.expect(w.w3 >= -slack, "W3 < 0 at trial " + std::to_string(trial));
    check.expect(w.w4 >= -slack, "W4 < 0 at trial " + std::to_string(trial));
    check.expect(w.w5 >= -slack, "W5 < 0 at trial " + std::to_string(trial));
    check.expect(w.w2 >= w.w1 - slack, "W2 < W1 at trial " + std::to_string(trial));
    check.expect(g >= w.w1 - slack, "E[Z]E[Z^3]-(E[Z^2])^2 < W1 at trial " + std::to_string(trial));
    check.expect(w.w4 >= z * w.w3 - slack, "W4 < z W3 at trial " + std::to_string(trial));
    check.expect(w.w5 >= 2.0 * z * w.w4 - slack, "W5 < 2z W4 at trial " + std::to_string(trial));

    for (double a : {0.0, 0.1, 0.5, 0.9}) {
      for (double q : {0.0, 0.1, 0.5, 0.9}) {
        const auto d = covariance_decomposition(part, a, q, h);
        for (std::size_t i = 0; i < d.size(); ++i) {
          check.expect(d[i] >= -slack, "D" + std::to_string(i + 1) + " < 0 at trial " +
                                           std::to_string(trial));
        }
        const double cov = covariance_total(part, a, q, h);
        const double cov_xy = covariance_total(part, 0.0, q, h);
        check.expect(cov >= cov_xy - slack, "cov < cov(X,Y) at trial " + std::to_string(trial));
        check.expect(cov_xy >= -slack, "cov(X,Y) < 0 at trial " + std::to_string(trial));
      }
    }
  }
  const double seconds = elapsed_s(start);
  check.expect(seconds < 10.0, "runtime " + std::to_string(seconds) + "s exceeds 10s");
  check.detail << "\n    200 pmfs x 16 grid points, " << seconds << "s";
  return check;
}

// ---------------------------------------------------------------- criterion 2
Check criterion2_dual_path() {
  Check check;
  Rng rng(20240602);
  for (int trial = 0; trial < 200; ++trial) {
    const int b = 2 + trial % 3;
    const auto dist = make_random_strict_pmf(rng, b);
    const auto part = partition_pmf(dist, b, true);
    for (const auto& h : {identity_permutation(b), reversal_permutation(b)}) {
      for (double a : {0.0, 0.1, 0.5, 0.9}) {
        for (double q : {0.0, 0.1, 0.5, 0.9}) {
          const double cov = covariance_total(part, a, q, h);
          const double assembled = covariance_assembled(part, a, q, h);
          const auto d = covariance_decomposition(part, a, q, h);
          const double decomposed = std::accumulate(d.begin(), d.end(), 0.0);
          check.expect(rel_diff(cov, assembled) <= 1e-9,
                       "coefficient vs assembled mismatch at trial " + std::to_string(trial));
          check.expect(rel_diff(cov, decomposed) <= 1e-9,
                       "coefficient vs decomposition mismatch at trial " + std::to_string(trial));
        }
      }
    }
  }
  check.detail << "\n    200 pmfs x 2 permutations x 16 grid points";
  return check;
}

// ---------------------------------------------------------------- criterion 3
Check criterion3_exact_reference() {
  Check check;
  const auto part = reference_partition();
  const auto h = identity_permutation(2);
  for (double q : {0.0, 0.25, 0.5, 1.0}) {
    const double cov = covariance_total(part, 0.0, q, h);
    const double rho = pearson_correlation(part, 0.0, q, h);
    check.expect(std::abs(cov - q) <= 1e-12, "cov != q at q=" + std::to_string(q));
    check.expect(std::abs(rho - q) <= 1e-12, "rho != q at q=" + std::to_string(q));
  }
  return check;
}

// ---------------------------------------------------------------- criterion 4
Check criterion4_expectation_oracle() {
  Check check;
  Rng rng(20240604);
  for (int trial = 0; trial < 50; ++trial) {
    const int b = 2 + trial % 3;
    const auto dist = make_random_strict_pmf(rng, b);
    const auto part = partition_pmf(dist, b, true);
    const auto h = trial % 2 == 0 ? identity_permutation(b) : reversal_permutation(b);
    const double q = rng.uniform01();

    const JointOracle oracle(dist, part, q, h);
    const auto expected = oracle.table();
    const auto actual = expectation_table(part, q, h);
    const auto compare = [&](double lhs, double rhs, const char* name) {
      check.expect(rel_diff(lhs, rhs) <= 1e-12,
                   std::string(name) + " mismatch at trial " + std::to_string(trial));
    };
    compare(actual.x, expected.x, "E[X]");
    compare(actual.x2, expected.x2, "E[X^2]");
    compare(actual.xy, expected.xy, "E[XY]");
    compare(actual.x2y, expected.x2y, "E[X^2Y]");
    compare(actual.x_gy, expected.x_gy, "E[X g]");
    compare(actual.y_gy, expected.y_gy, "E[Y g]");
    compare(actual.x_gy2, expected.x_gy2, "E[X g^2]");
    compare(actual.x2_gy2, expected.x2_gy2, "E[X^2 g^2]");
    compare(actual.xy_gy, expected.xy_gy, "E[XY g]");
    compare(actual.gy_fx, expected.gy_fx, "E[g f]");
    compare(actual.y_gy_fx, expected.y_gy_fx, "E[Y g f]");
    compare(actual.xy_gy_fx, expected.xy_gy_fx, "E[XY g f]");
  }
  check.detail << "\n    50 pmfs, 12 expectations each, tolerance 1e-12";
  return check;
}

// ------------------------------------------------------- criteria 5 and 6 data
struct SimCell {
  double a, q;
  bool reversal;
  VerifyReport report;
  double analytic_cov = 0;
};

std::vector<SimCell> run_simulation_cells() {
  const double gamma = 3.0;
  const int kmin = 5, kmax = 15, n = 10000, b = 2, reps = 50;
  const auto pmf = DegreeDistribution::power_law(gamma, kmin, kmax);
  const auto part = partition_pmf(pmf, b, /*strict=*/false);

  std::vector<SimCell> cells;
  std::uint64_t cell_index = 0;
  for (double a : {0.0, 0.1, 0.5}) {
    for (double q : {0.1, 0.5, 0.9}) {
      for (bool reversal : {false, true}) {
        ModelConfig config;
        config.community_sizes = {n};
        config.blocks = b;
        config.q = q;
        config.r = 1.0;
        config.a = a;
        config.gamma = gamma;
        config.kmin = kmin;
        config.kmax = kmax;
        config.h = reversal ? reversal_permutation(b) : identity_permutation(b);
        config.seed = Rng::derive(20240605, cell_index++);

        VerifyOptions options;
        options.reps = reps;
        SimCell cell{a, q, reversal, run_verification(config, part, options), 0.0};
        cell.analytic_cov = covariance_total(part, a, q, config.h);
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

Check criterion5_simulation_agreement(const std::vector<SimCell>& cells, double seconds) {
  Check check;
  for (const auto& cell : cells) {
    const VerifyQuantity* cov = nullptr;
    for (const auto& q : cell.report.quantities) {
      if (q.name == "cov(X+X',Y+Y')") cov = &q;
    }
    if (cov == nullptr) {
      check.expect(false, "covariance quantity missing");
      continue;
    }
    const double kse = cell.a == 0.5 ? 5.0 : 3.0;
    const double tolerance =
        std::max(kse * cov->stderr_mean, 0.05 * std::abs(cov->analytic) + 0.02);
    const double gap = std::abs(cov->empirical_mean - cov->analytic);
    std::ostringstream label;
    label << "a=" << cell.a << " q=" << cell.q << (cell.reversal ? " h=rev" : " h=id");
    check.expect(gap <= tolerance,
                 label.str() + ": |emp-analytic|=" + std::to_string(gap) + " > tol=" +
                     std::to_string(tolerance));
    // per-pair vs per-wedge closure gap, per cell
    const double pair_wedge_gap =
        cell.report.mean_eligible_wedges > 0
            ? 1.0 - cell.report.mean_candidate_pairs / cell.report.mean_eligible_wedges
            : 0.0;
    check.detail << "\n    " << label.str() << ": analytic=" << cov->analytic
                 << " empirical=" << cov->empirical_mean << " se=" << cov->stderr_mean
                 << " pair/wedge gap=" << pair_wedge_gap;
  }
  check.expect(seconds <= 600.0, "runtime " + std::to_string(seconds) + "s exceeds 600s");
  check.detail << "\n    18 cells x 50 reps at n=10000, " << seconds << "s";
  return check;
}

Check criterion6_clustering_agreement(const std::vector<SimCell>& cells) {
  Check check;
  long long cells_checked = 0;
  double worst_systematic = 0;
  for (const auto& cell : cells) {
    for (const auto& group : cell.report.clustering) {
      if (group.samples < 100) continue;
      ++cells_checked;
      // the stated band bounds the systematic deviation; barely-populated
      // cells additionally carry unavoidable sampling noise (3 SE)
      const double band = group.kprime == 0 ? 0.02 : 0.05;
      const double tolerance = band + 3.0 * group.stderr_mean;
      const double reference =
          group.kprime == 0 ? (group.k >= 2 ? cell.a : 0.0) : group.predicted;
      const double deviation = std::abs(group.empirical - reference);
      worst_systematic = std::max(worst_systematic, deviation - 3.0 * group.stderr_mean);
      std::ostringstream label;
      label << "a=" << cell.a << " q=" << cell.q << (cell.reversal ? " rev" : " id")
            << " cell(" << group.k << "," << group.kprime << ") n=" << group.samples;
      check.expect(deviation <= tolerance,
                   label.str() + ": |" + std::to_string(group.empirical) + " - " +
                       std::to_string(reference) + "| > " + std::to_string(tolerance));
    }
  }
  check.expect(cells_checked > 0, "no populated clustering cells");
  check.detail << "\n    " << cells_checked
               << " populated (k,k') cells checked; worst noise-adjusted deviation "
               << worst_systematic;
  return check;
}

// ---------------------------------------------------------------- criterion 7
Check criterion7_generator_invariants() {
  Check check;

  // regular-degree preservation and byte-exact determinism
  {
    ModelConfig config;
    config.community_sizes = {1500, 500};
    config.blocks = 2;
    config.q = 0.3;
    config.r = 0.7;
    config.a = 0.2;
    config.gamma = 2.5;
    config.kmin = 2;
    config.kmax = 60;
    config.seed = 777;
    const auto g1 = generate(config);
    const auto g2 = generate(config);
    check.expect(edges_to_tsv(g1) == edges_to_tsv(g2), "same seed produced different graphs");

    std::vector<int> counted(static_cast<std::size_t>(g1.n), 0);
    for (const Edge& e : g1.edges) {
      if (e.kind != EdgeKind::Regular) continue;
      counted[static_cast<std::size_t>(e.u)] += 1;
      counted[static_cast<std::size_t>(e.v)] += 1;
    }
    check.expect(counted == g1.regular_degree, "regular degrees not preserved");
  }

  // type-1 block bipartiteness, exact: uniform degrees make blocks vertex ranges
  {
    ModelConfig config;
    config.community_sizes = {40};
    config.blocks = 4;
    config.q = 1.0;
    config.r = 1.0;
    config.a = 0.0;
    config.seed = 11;
    DegreeSequence seq;
    seq.communities = {std::vector<int>(40, 4)};
    config.degrees = seq;
    config.h = reversal_permutation(4);
    const auto graph = generate(config);
    for (const Edge& e : graph.edges) {
      check.expect(e.u / 10 == 3 - e.v / 10, "type-1 edge violates block pairing");
    }
  }

  // wedge enumeration equals brute force on 50 small random graphs
  {
    Rng rng(20240607);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 20 + static_cast<int>(rng.below(181));
      std::vector<Edge> edges;
      const int m = n + static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n)));
      for (int i = 0; i < m; ++i) {
        const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (u != v) edges.push_back({u, v, EdgeKind::Regular});
      }
      const auto g = make_graph(n, edges);
      const auto adj = g.simple_adjacency(false);
      check.expect(closure_candidate_pairs(adj) == brute_force_candidates(adj),
                   "candidate set mismatch at trial " + std::to_string(trial));
    }
  }
  return check;
}

// ---------------------------------------------------------------- criterion 8
Check criterion8_nmi() {
  Check check;
  Rng rng(20240608);

  std::vector<int> labels(10000);
  for (auto& l : labels) l = static_cast<int>(rng.below(10));
  check.expect(nmi(labels, labels) == 1.0, "identity NMI != 1");

  const std::vector<int> single(10000, 3);
  check.expect(nmi(single, labels) == 0.0, "single-community NMI != 0");

  for (int trial = 0; trial < 5; ++trial) {
    // balanced random 10-way labelings: shuffled block assignments
    std::vector<int> p1(10000), p2(10000);
    for (int i = 0; i < 10000; ++i) {
      p1[static_cast<std::size_t>(i)] = i % 10;
      p2[static_cast<std::size_t>(i)] = i % 10;
    }
    rng.shuffle(p1);
    rng.shuffle(p2);
    const double value = nmi(p1, p2);
    check.expect(value <= 0.05, "random balanced NMI " + std::to_string(value) + " > 0.05");
  }
  return check;
}

// ---------------------------------------------------------------- criterion 9
Check criterion9_benchmark_trend(double* seconds_out) {
  Check check;
  const auto start = std::chrono::steady_clock::now();

  ModelConfig base;
  base.community_sizes = std::vector<int>(10, 1000);
  base.blocks = 2;
  base.q = 0.1;
  base.a = 0.1;
  base.gamma = 2.5;
  base.kmin = 2;
  base.kmax = 100;
  base.h = identity_permutation(2);

  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
  const auto report = run_benchmark(base, "r", grid, 30, "fast_unfolding", 20240609);

  std::vector<double> means;
  for (const auto& cell : report.cells) means.push_back(cell.mean_nmi);
  const double trend = spearman(grid, means);
  check.expect(trend > 0.0, "Spearman correlation " + std::to_string(trend) + " <= 0");
  check.expect(means.back() - means.front() >= 0.1,
               "NMI(r=0.9) - NMI(r=0.1) = " + std::to_string(means.back() - means.front()) +
                   " < 0.1");

  const double seconds = elapsed_s(start);
  *seconds_out = seconds;
  check.expect(seconds <= 1200.0, "runtime " + std::to_string(seconds) + "s exceeds 1200s");

  check.detail << "\n    spearman=" << trend << ", mean NMI:";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check.detail << " r=" << grid[i] << ":" << means[i];
  }
  check.detail << "\n    30 reps per cell, " << seconds << "s";
  return check;
}

void report(int id, const std::string& name, const Check& check, int& failures) {
  if (!check.ok) ++failures;
  std::printf("[%s] criterion %d: %s%s\n", check.ok ? "PASS" : "FAIL", id, name.c_str(),
              check.detail.str().c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  int failures = 0;

  report(1, "covariance decomposition nonnegativity and ordering", criterion1_decomposition_suite(),
         failures);
  report(2, "dual-path covariance identity", criterion2_dual_path(), failures);
  report(3, "exact reference-pmf special case", criterion3_exact_reference(), failures);
  report(4, "expectation table vs exhaustive joint-pmf oracle", criterion4_expectation_oracle(),
         failures);

  const auto sim_start = std::chrono::steady_clock::now();
  const auto cells = run_simulation_cells();
  const double sim_seconds = elapsed_s(sim_start);
  report(5, "simulation agreement at n=10000", criterion5_simulation_agreement(cells, sim_seconds),
         failures);
  report(6, "local clustering agreement", criterion6_clustering_agreement(cells), failures);

  report(7, "generator invariants", criterion7_generator_invariants(), failures);
  report(8, "NMI conventions", criterion8_nmi(), failures);

  double bench_seconds = 0;
  report(9, "benchmark NMI trend in r", criterion9_benchmark_trend(&bench_seconds), failures);

  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures;
}
