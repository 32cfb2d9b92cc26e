#include <algorithm>
#include <numeric>
#include <set>

#include "ctc/generator.hpp"
#include "ctc/io.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace ctc;
using namespace ctc::testing;

namespace {

// 50 degree-4 vertices: 200 stubs, blocks of 100 when b=2
BlockPartition uniform_partition(int vertices, int degree, int b) {
  return partition_into_blocks(std::vector<int>(static_cast<std::size_t>(vertices), degree),
                               b, /*strict=*/false);
}

std::map<int, long long> edge_degree_histogram(const CtcGraph& g) {
  std::vector<int> degree(static_cast<std::size_t>(g.n), 0);
  for (const Edge& e : g.edges) {
    if (e.kind != EdgeKind::Regular) continue;
    degree[static_cast<std::size_t>(e.u)] += 1;
    degree[static_cast<std::size_t>(e.v)] += 1;
  }
  std::map<int, long long> histogram;
  for (int d : degree) histogram[d] += 1;
  return histogram;
}

}  // namespace

TEST_CASE("stub type counts follow the ceiling arithmetic") {
  const auto part = uniform_partition(50, 4, 2);
  REQUIRE(part.blocks[0].size() == 100);
  Rng rng(3);
  const auto typed = assign_stub_types(part, 0.1, 0.5, rng);
  for (int j = 0; j < 2; ++j) {
    CHECK(typed.count_of(j, 1) == 5);
    CHECK(typed.count_of(j, 2) == 45);
    CHECK(typed.count_of(j, 3) == 50);
  }
  CHECK_FALSE(typed.clamped);
}

TEST_CASE("r extremes assign a single type") {
  const auto part = uniform_partition(50, 4, 2);
  Rng rng(4);
  const auto all3 = assign_stub_types(part, 0.5, 0.0, rng);
  for (int j = 0; j < 2; ++j) {
    CHECK(all3.count_of(j, 3) == 100);
  }
  const auto all1 = assign_stub_types(part, 1.0, 1.0, rng);
  for (int j = 0; j < 2; ++j) {
    CHECK(all1.count_of(j, 1) == 100);
  }
}

TEST_CASE("type-1 wiring respects the block pairing") {
  // 40 degree-4 vertices, b=4: block j holds exactly vertices [10j, 10j+10)
  ModelConfig config;
  config.community_sizes = {40};
  config.blocks = 4;
  config.q = 1.0;
  config.r = 1.0;
  config.a = 0.0;
  config.seed = 17;
  DegreeSequence seq;
  seq.communities = {std::vector<int>(40, 4)};
  config.degrees = seq;

  const auto block_of = [](int v) { return v / 10; };

  SUBCASE("identity keeps edges inside blocks") {
    config.h = identity_permutation(4);
    const auto graph = generate(config);
    for (const Edge& e : graph.edges) {
      CHECK(block_of(e.u) == block_of(e.v));
    }
  }
  SUBCASE("reversal joins mirrored blocks") {
    config.h = reversal_permutation(4);
    const auto graph = generate(config);
    for (const Edge& e : graph.edges) {
      CHECK(block_of(e.u) == 3 - block_of(e.v));
    }
  }
  SUBCASE("pair swap joins 0-1 and 2-3") {
    config.h = {1, 0, 3, 2};
    const auto graph = generate(config);
    for (const Edge& e : graph.edges) {
      const int bu = block_of(e.u), bv = block_of(e.v);
      CHECK(((bu == 0 && bv == 1) || (bu == 1 && bv == 0) || (bu == 2 && bv == 3) ||
             (bu == 3 && bv == 2)));
    }
  }
}

TEST_CASE("r=1 forbids inter-community edges") {
  ModelConfig config;
  config.community_sizes = {30, 30};
  config.blocks = 2;
  config.q = 0.4;
  config.r = 1.0;
  config.a = 0.2;
  config.seed = 5;
  DegreeSequence seq;
  seq.communities = {std::vector<int>(30, 4), std::vector<int>(30, 4)};
  config.degrees = seq;

  const auto graph = generate(config);
  long long regular_inter = 0;
  for (const Edge& e : graph.edges) {
    if (e.kind == EdgeKind::Regular &&
        graph.community[static_cast<std::size_t>(e.u)] !=
            graph.community[static_cast<std::size_t>(e.v)]) {
      ++regular_inter;
    }
  }
  CHECK(regular_inter == 0);
}

TEST_CASE("regular degrees are preserved exactly") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    ModelConfig config;
    config.community_sizes = {200, 100};
    config.blocks = 3;
    config.q = 0.3;
    config.r = 0.6;
    config.a = 0.1;
    config.gamma = 2.5;
    config.kmin = 2;
    config.kmax = 30;
    config.seed = seed;
    const auto graph = generate(config);

    std::vector<int> counted(static_cast<std::size_t>(graph.n), 0);
    for (const Edge& e : graph.edges) {
      if (e.kind != EdgeKind::Regular) continue;
      counted[static_cast<std::size_t>(e.u)] += 1;
      counted[static_cast<std::size_t>(e.v)] += 1;
    }
    CHECK(counted == graph.regular_degree);
    CHECK(edge_degree_histogram(graph) == degree_histogram(graph.regular_degree));
  }
}

TEST_CASE("triadic closure on canonical small graphs") {
  SUBCASE("a=0 adds nothing") {
    const auto g = make_graph(4, {{0, 1, EdgeKind::Regular}, {0, 2, EdgeKind::Regular},
                                  {0, 3, EdgeKind::Regular}});
    Rng rng(9);
    CHECK(apply_triadic_closure(g, 0.0, rng).empty());
  }
  SUBCASE("star plus a=1 closes into a clique") {
    const auto g = make_graph(4, {{0, 1, EdgeKind::Regular}, {0, 2, EdgeKind::Regular},
                                  {0, 3, EdgeKind::Regular}});
    Rng rng(9);
    const auto transitive = apply_triadic_closure(g, 1.0, rng);
    CHECK(transitive.size() == 3);
    std::set<std::pair<int, int>> pairs;
    for (const Edge& e : transitive) pairs.insert({e.u, e.v});
    CHECK(pairs == std::set<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}});
  }
  SUBCASE("triangle has no candidates") {
    const auto g = make_graph(3, {{0, 1, EdgeKind::Regular}, {1, 2, EdgeKind::Regular},
                                  {0, 2, EdgeKind::Regular}});
    Rng rng(9);
    CHECK(apply_triadic_closure(g, 1.0, rng).empty());
  }
}

TEST_CASE("wedge enumeration equals the brute-force pair scan") {
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 20 + static_cast<int>(rng.below(181));
    // sparse random graph
    std::vector<Edge> edges;
    const int m = n + static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n)));
    for (int i = 0; i < m; ++i) {
      const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (u != v) edges.push_back({u, v, EdgeKind::Regular});
    }
    const auto g = make_graph(n, edges);
    const auto adj = g.simple_adjacency(false);
    CHECK(closure_candidate_pairs(adj) == brute_force_candidates(adj));
  }
}

TEST_CASE("generation is deterministic per seed") {
  ModelConfig config;
  config.community_sizes = {150};
  config.blocks = 2;
  config.q = 0.5;
  config.r = 1.0;
  config.a = 0.3;
  config.gamma = 2.5;
  config.kmin = 2;
  config.kmax = 40;
  config.seed = 777;

  const auto g1 = generate(config);
  const auto g2 = generate(config);
  CHECK(edges_to_tsv(g1) == edges_to_tsv(g2));

  config.seed = 778;
  const auto g3 = generate(config);
  CHECK(edges_to_tsv(g1) != edges_to_tsv(g3));
}

TEST_CASE("transitive edges never duplicate regular adjacencies") {
  ModelConfig config;
  config.community_sizes = {300};
  config.blocks = 2;
  config.q = 0.5;
  config.r = 1.0;
  config.a = 0.4;
  config.gamma = 2.2;
  config.kmin = 2;
  config.kmax = 40;
  config.seed = 31;
  const auto graph = generate(config);

  const auto regular = graph.simple_adjacency(false);
  long long transitive_count = 0;
  for (const Edge& e : graph.edges) {
    if (e.kind != EdgeKind::Transitive) continue;
    ++transitive_count;
    CHECK(e.u != e.v);
    CHECK_FALSE(std::binary_search(regular[static_cast<std::size_t>(e.u)].begin(),
                                   regular[static_cast<std::size_t>(e.u)].end(), e.v));
    // and the pair shares at least one regular neighbor
    bool common = false;
    for (int w : regular[static_cast<std::size_t>(e.u)]) {
      if (std::binary_search(regular[static_cast<std::size_t>(e.v)].begin(),
                             regular[static_cast<std::size_t>(e.v)].end(), w)) {
        common = true;
        break;
      }
    }
    CHECK(common);
  }
  CHECK(transitive_count > 0);
  CHECK(graph.transitive_edge_count() == transitive_count);
}

TEST_CASE("randomized configs keep every graph invariant") {
  Rng seeds(88);
  for (int trial = 0; trial < 25; ++trial) {
    ModelConfig config;
    config.community_sizes = {51 + static_cast<int>(seeds.below(50)),
                              37 + static_cast<int>(seeds.below(50))};
    config.blocks = 1 + static_cast<int>(seeds.below(4));
    config.q = seeds.uniform01();
    config.r = seeds.uniform01();
    config.a = seeds.uniform01() * 0.5;
    config.gamma = 2.4;
    config.kmin = 1;
    config.kmax = 20;
    config.seed = seeds.next();
    config.h = (config.blocks > 1 && trial % 2 == 0)
                   ? reversal_permutation(config.blocks)
                   : identity_permutation(config.blocks);
    // parity repair must leave every pool matchable (odd pools would surface
    // as logic_error), and every stub ends up in exactly one edge
    const auto graph = generate(config);
    CHECK(graph.regular_edge_count() * 2 ==
          std::accumulate(graph.regular_degree.begin(), graph.regular_degree.end(), 0LL));

    std::vector<int> counted(static_cast<std::size_t>(graph.n), 0);
    for (const Edge& e : graph.edges) {
      if (e.kind != EdgeKind::Regular) continue;
      counted[static_cast<std::size_t>(e.u)] += 1;
      counted[static_cast<std::size_t>(e.v)] += 1;
    }
    CHECK(counted == graph.regular_degree);

    // transitive edges: loop-free, distinct from regular adjacencies, and
    // justified by a common regular neighbor
    const auto regular = graph.simple_adjacency(false);
    for (const Edge& e : graph.edges) {
      if (e.kind != EdgeKind::Transitive) continue;
      REQUIRE(e.u != e.v);
      REQUIRE_FALSE(std::binary_search(regular[static_cast<std::size_t>(e.u)].begin(),
                                       regular[static_cast<std::size_t>(e.u)].end(), e.v));
      bool common = false;
      for (int w : regular[static_cast<std::size_t>(e.u)]) {
        if (std::binary_search(regular[static_cast<std::size_t>(e.v)].begin(),
                               regular[static_cast<std::size_t>(e.v)].end(), w)) {
          common = true;
          break;
        }
      }
      REQUIRE(common);
    }
  }
}

TEST_CASE("config validation names the offending field") {
  ModelConfig config;
  config.community_sizes = {10};
  config.blocks = 2;
  config.q = 1.5;
  CHECK_THROWS_WITH_AS(config.validate(), "config: q must be in [0,1]",
                       std::invalid_argument);
  config.q = 0.5;
  config.h = {1, 2, 0};  // 3-cycle, not an involution
  config.blocks = 3;
  CHECK_THROWS_WITH_AS(config.validate(), "config: h is not an involution",
                       std::invalid_argument);
}
