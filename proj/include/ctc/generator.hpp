#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctc/closed_form.hpp"
#include "ctc/degree_model.hpp"

namespace ctc {

enum class EdgeKind : std::uint8_t { Regular, Transitive };

struct Edge {
  int u;
  int v;
  EdgeKind kind;
};

// All generation parameters.  h is an involution on blocks 0..b-1 (empty
// means identity).  Degrees come either from explicit per-community
// sequences or the truncated power law (kmax 0 selects n-1).
struct ModelConfig {
  std::vector<int> community_sizes{1};
  int blocks = 1;
  double q = 0.0;
  double r = 1.0;
  double a = 0.0;
  std::vector<int> h;
  std::uint64_t seed = 0;

  std::optional<DegreeSequence> degrees;
  double gamma = 2.5;
  int kmin = 2;
  int kmax = 0;

  int total_vertices() const;
  std::vector<int> permutation() const;
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct CtcGraph {
  int n = 0;
  std::vector<int> community;
  std::vector<Edge> edges;               // regular edges first, then transitive
  std::vector<int> regular_degree;       // stub count (self-loops count twice)
  std::vector<int> transitive_degree;
  long long self_loop_count = 0;
  long long multi_edge_count = 0;
  bool type_counts_clamped = false;      // ceilings exceeded a block size
  long long demoted_stub_count = 0;      // parity repairs applied

  long long regular_edge_count() const;
  long long transitive_edge_count() const;
  // Deduplicated loop-free neighbor lists, sorted ascending.
  std::vector<std::vector<int>> simple_adjacency(bool include_transitive) const;
};

// Stub types per block of one community, parallel to BlockPartition::blocks.
struct TypedBlocks {
  std::vector<std::vector<std::uint8_t>> type;  // 1, 2 or 3 per stub
  bool clamped = false;
  long long demoted = 0;

  long long count_of(int block, std::uint8_t t) const;
};

// Alg. 1 lines 5-6: per block, ceil(2m q r / b) type-1 and
// ceil(2m (1-q) r / b) type-2 stubs chosen uniformly; the rest type 3.
TypedBlocks assign_stub_types(const BlockPartition& partition, double q, double r,
                              Rng& rng);

// Makes every matching pool pairable: type-1 pools of blocks (j, h(j)) are
// equalized (made even when j = h(j)) by demoting surplus stubs to type 2;
// an odd per-community type-2 pool demotes one stub to type 3.  The global
// type-3 pool is even afterwards by parity.
void repair_stub_types(std::vector<TypedBlocks>& communities,
                       const std::vector<int>& h, Rng& rng);

// Uniform random matching inside every pool.  vertex_offsets maps
// community-local vertex ids to global ids.
std::vector<Edge> wire_regular_edges(const std::vector<TypedBlocks>& communities,
                                     const std::vector<BlockPartition>& partitions,
                                     const std::vector<int>& vertex_offsets,
                                     const std::vector<int>& h, Rng& rng);

// Unordered non-adjacent pairs with at least one common neighbor, enumerated
// by wedge traversal over the given simple adjacency (cost O(sum deg^2)).
std::vector<std::pair<int, int>> closure_candidate_pairs(
    const std::vector<std::vector<int>>& adj);

// One Bernoulli(a) trial per candidate pair.
std::vector<Edge> apply_triadic_closure(const CtcGraph& graph, double a, Rng& rng);

// Full Algorithm 1 pipeline; deterministic per config.seed.
CtcGraph generate(const ModelConfig& config);

}  // namespace ctc
