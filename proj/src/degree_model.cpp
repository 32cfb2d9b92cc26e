#include "ctc/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ctc {

DegreeDistribution DegreeDistribution::from_pmf(std::map<int, double> probabilities) {
  if (probabilities.empty()) {
    throw std::invalid_argument("degree pmf: no entries");
  }
  double total = 0.0;
  for (const auto& [k, p] : probabilities) {
    if (k < 0) throw std::invalid_argument("degree pmf: negative degree " + std::to_string(k));
    if (p < 0.0) throw std::invalid_argument("degree pmf: negative probability at degree " + std::to_string(k));
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("degree pmf: probabilities sum to " + std::to_string(total));
  }
  DegreeDistribution dist;
  dist.probabilities = std::move(probabilities);
  for (const auto& [k, p] : dist.probabilities) {
    const double kd = static_cast<double>(k);
    dist.moment1 += kd * p;
    dist.moment2 += kd * kd * p;
    dist.moment3 += kd * kd * kd * p;
  }
  return dist;
}

DegreeDistribution DegreeDistribution::power_law(double gamma, int kmin, int kmax) {
  if (gamma <= 1.0) throw std::invalid_argument("power law: gamma must exceed 1");
  if (kmin < 1 || kmin > kmax) throw std::invalid_argument("power law: need 1 <= kmin <= kmax");
  std::map<int, double> probs;
  double norm = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    norm += std::pow(static_cast<double>(k), -gamma);
  }
  double total = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    probs[k] = std::pow(static_cast<double>(k), -gamma) / norm;
    total += probs[k];
  }
  // second pass squeezes out the accumulation drift on wide supports
  for (auto& [k, p] : probs) p /= total;
  return from_pmf(std::move(probs));
}

int DegreeSequence::vertex_count() const {
  int n = 0;
  for (const auto& c : communities) n += static_cast<int>(c.size());
  return n;
}

long long DegreeSequence::stub_count(std::size_t community) const {
  const auto& c = communities.at(community);
  return std::accumulate(c.begin(), c.end(), 0LL);
}

long long DegreeSequence::stub_count() const {
  long long total = 0;
  for (std::size_t i = 0; i < communities.size(); ++i) total += stub_count(i);
  return total;
}

std::vector<int> DegreeSequence::flattened() const {
  std::vector<int> all;
  for (const auto& c : communities) all.insert(all.end(), c.begin(), c.end());
  return all;
}

DegreeDistribution pmf_from_sequence(const std::vector<int>& degrees) {
  if (degrees.empty()) throw std::invalid_argument("pmf_from_sequence: empty degree sequence");
  std::map<int, double> counts;
  for (int k : degrees) {
    if (k < 0) throw std::invalid_argument("pmf_from_sequence: negative degree");
    counts[k] += 1.0;
  }
  const double n = static_cast<double>(degrees.size());
  for (auto& [k, c] : counts) c /= n;
  return DegreeDistribution::from_pmf(std::move(counts));
}

DegreeDistribution pmf_from_sequence(const DegreeSequence& sequence) {
  return pmf_from_sequence(sequence.flattened());
}

Moments distribution_moments(const DegreeDistribution& dist) {
  return {dist.moment1, dist.moment2, dist.moment3};
}

std::vector<int> sample_power_law_degrees(int n, double gamma, int kmin,
                                          int kmax, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sampler: n must be positive");
  if (gamma <= 1.0) throw std::invalid_argument("sampler: gamma must exceed 1");
  if (kmin < 1 || kmin > kmax) throw std::invalid_argument("sampler: need 1 <= kmin <= kmax");

  // inverse CDF over the truncated support
  std::vector<double> cumulative(static_cast<std::size_t>(kmax - kmin) + 1);
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    sum += std::pow(static_cast<double>(k), -gamma);
    cumulative[static_cast<std::size_t>(k - kmin)] = sum;
  }
  for (double& c : cumulative) c /= sum;
  cumulative.back() = 1.0;

  std::vector<int> degrees(static_cast<std::size_t>(n));
  long long total = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform01();
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), x);
    degrees[static_cast<std::size_t>(i)] =
        kmin + static_cast<int>(it - cumulative.begin());
    total += degrees[static_cast<std::size_t>(i)];
  }
  if (total % 2 != 0) {
    degrees[rng.index(degrees.size())] += 1;
  }
  return degrees;
}

DegreeSequence sample_power_law_sequence(const std::vector<int>& community_sizes,
                                         double gamma, int kmin, int kmax,
                                         Rng& rng) {
  DegreeSequence seq;
  seq.communities.reserve(community_sizes.size());
  for (int n_i : community_sizes) {
    seq.communities.push_back(sample_power_law_degrees(n_i, gamma, kmin, kmax, rng));
  }
  return seq;
}

bool BlockPartition::any_straddle() const {
  return std::any_of(straddle.begin(), straddle.end(), [](bool s) { return s; });
}

double BlockPartition::second_moment() const {
  return std::accumulate(u.begin(), u.end(), 0.0);
}

double BlockPartition::third_moment() const {
  return std::accumulate(t.begin(), t.end(), 0.0);
}

BlockPartition partition_into_blocks(const std::vector<int>& degrees, int b,
                                     bool strict) {
  if (b < 1) throw std::invalid_argument("partition: b must be positive");
  if (degrees.empty()) throw std::invalid_argument("partition: empty degree sequence");

  // stubs sorted ascending by degree; ties in vertex order so the layout is
  // deterministic
  std::vector<int> order(degrees.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int c) { return degrees[static_cast<std::size_t>(a)] <
                                              degrees[static_cast<std::size_t>(c)]; });
  std::vector<Stub> stubs;
  long long total = 0;
  for (int v : order) total += degrees[static_cast<std::size_t>(v)];
  stubs.reserve(static_cast<std::size_t>(total));
  for (int v : order) {
    for (int s = 0; s < degrees[static_cast<std::size_t>(v)]; ++s) {
      stubs.push_back({v, s});
    }
  }

  if (strict && total % b != 0) {
    throw std::invalid_argument("partition: stub count " + std::to_string(total) +
                                " not divisible by b=" + std::to_string(b));
  }

  BlockPartition part;
  part.num_blocks = b;
  part.strict = strict;
  const double n = static_cast<double>(degrees.size());
  part.block_stub_mass = static_cast<double>(total) / (n * b);
  part.u.assign(static_cast<std::size_t>(b), 0.0);
  part.t.assign(static_cast<std::size_t>(b), 0.0);
  part.degree_sets.resize(static_cast<std::size_t>(b));
  part.straddle.assign(b > 0 ? static_cast<std::size_t>(b - 1) : 0, false);
  part.blocks.resize(static_cast<std::size_t>(b));

  const long long base = total / b;
  const long long rem = total % b;
  std::size_t cursor = 0;
  for (int i = 0; i < b; ++i) {
    const long long size = base + (i < rem ? 1 : 0);
    auto& block = part.blocks[static_cast<std::size_t>(i)];
    block.assign(stubs.begin() + static_cast<std::ptrdiff_t>(cursor),
                 stubs.begin() + static_cast<std::ptrdiff_t>(cursor + size));
    cursor += static_cast<std::size_t>(size);
    int last = -1;
    for (const Stub& s : block) {
      const int k = degrees[static_cast<std::size_t>(s.vertex)];
      part.u[static_cast<std::size_t>(i)] += static_cast<double>(k) / n;
      part.t[static_cast<std::size_t>(i)] += static_cast<double>(k) * k / n;
      if (k != last) {
        part.degree_sets[static_cast<std::size_t>(i)].push_back(k);
        last = k;
      }
    }
  }

  for (int i = 0; i + 1 < b; ++i) {
    const auto& left = part.blocks[static_cast<std::size_t>(i)];
    const auto& right = part.blocks[static_cast<std::size_t>(i + 1)];
    if (left.empty() || right.empty()) continue;
    const int kl = degrees[static_cast<std::size_t>(left.back().vertex)];
    const int kr = degrees[static_cast<std::size_t>(right.front().vertex)];
    if (kl == kr) {
      part.straddle[static_cast<std::size_t>(i)] = true;
      if (strict) {
        throw assumption_violation("partition: degree " + std::to_string(kl) +
                                   " straddles blocks " + std::to_string(i + 1) +
                                   "/" + std::to_string(i + 2));
      }
    }
  }
  return part;
}

BlockPartition partition_pmf(const DegreeDistribution& dist, int b, bool strict) {
  if (b < 1) throw std::invalid_argument("partition: b must be positive");
  const double ez = dist.moment1;
  if (ez <= 0.0) throw std::invalid_argument("partition: zero mean degree");
  const double target = ez / b;

  BlockPartition part;
  part.num_blocks = b;
  part.strict = strict;
  part.block_stub_mass = target;
  part.u.assign(static_cast<std::size_t>(b), 0.0);
  part.t.assign(static_cast<std::size_t>(b), 0.0);
  part.degree_sets.resize(static_cast<std::size_t>(b));
  part.straddle.assign(static_cast<std::size_t>(b - 1), false);

  const double tol = 1e-9 * std::max(1.0, ez);
  int block = 0;
  double acc = 0.0;  // stub mass accumulated in current block
  for (const auto& [k, p] : dist.probabilities) {
    if (p <= 0.0) continue;
    if (k == 0) {
      // degree 0 carries no stub mass; bucket it with the first block
      part.degree_sets.front().push_back(k);
      continue;
    }
    double mass = static_cast<double>(k) * p;
    const double kd = static_cast<double>(k);
    while (mass > 0.0) {
      const double room = target - acc;
      if (mass <= room + tol) {
        part.u[static_cast<std::size_t>(block)] += kd * mass;
        part.t[static_cast<std::size_t>(block)] += kd * kd * mass;
        auto& set = part.degree_sets[static_cast<std::size_t>(block)];
        if (set.empty() || set.back() != k) set.push_back(k);
        acc += mass;
        mass = 0.0;
        if (acc >= target - tol && block + 1 < b) {
          block += 1;
          acc = 0.0;
        }
      } else {
        // degree k straddles the boundary between `block` and `block`+1
        if (strict) {
          throw assumption_violation("partition: degree " + std::to_string(k) +
                                     " straddles blocks " + std::to_string(block + 1) +
                                     "/" + std::to_string(block + 2));
        }
        part.u[static_cast<std::size_t>(block)] += kd * room;
        part.t[static_cast<std::size_t>(block)] += kd * kd * room;
        auto& set = part.degree_sets[static_cast<std::size_t>(block)];
        if (set.empty() || set.back() != k) set.push_back(k);
        part.straddle[static_cast<std::size_t>(block)] = true;
        mass -= room;
        block += 1;
        acc = 0.0;
        if (block >= b) {
          // numeric slack at the tail: dump the remainder into the last block
          block = b - 1;
          part.u[static_cast<std::size_t>(block)] += kd * mass;
          part.t[static_cast<std::size_t>(block)] += kd * kd * mass;
          auto& last = part.degree_sets[static_cast<std::size_t>(block)];
          if (last.empty() || last.back() != k) last.push_back(k);
          mass = 0.0;
        } else {
          auto& next = part.degree_sets[static_cast<std::size_t>(block)];
          if (next.empty() || next.back() != k) next.push_back(k);
        }
      }
    }
  }
  return part;
}

std::pair<std::vector<double>, std::vector<double>> block_moments(
    const BlockPartition& partition, const DegreeDistribution& dist) {
  if (!partition.strict) {
    return {partition.u, partition.t};
  }
  std::vector<double> u(static_cast<std::size_t>(partition.num_blocks), 0.0);
  std::vector<double> t(static_cast<std::size_t>(partition.num_blocks), 0.0);
  for (int i = 0; i < partition.num_blocks; ++i) {
    for (int k : partition.degree_sets[static_cast<std::size_t>(i)]) {
      const auto it = dist.probabilities.find(k);
      if (it == dist.probabilities.end()) continue;
      const double kd = static_cast<double>(k);
      u[static_cast<std::size_t>(i)] += kd * kd * it->second;
      t[static_cast<std::size_t>(i)] += kd * kd * kd * it->second;
    }
  }
  return {u, t};
}

}  // namespace ctc
