#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ctc {

// Deterministic random source shared by the whole toolkit.  mt19937_64 output
// is fully specified by the standard; the bounded/real samplers are hand-rolled
// here so that streams do not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound).  Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    if (bound < 2) return 0;
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  std::size_t index(std::size_t size) {
    return static_cast<std::size_t>(below(static_cast<std::uint64_t>(size)));
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

  // Independent stream for replica `stream` of a run seeded with `base`.
  static std::uint64_t derive(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 finalizer over the combined value
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ctc
