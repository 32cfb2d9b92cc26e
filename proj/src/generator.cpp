#include "ctc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ctc {

namespace {

long long ceil_count(double v) {
  if (v <= 0.0) return 0;
  return static_cast<long long>(std::ceil(v - 1e-9));
}

std::uint64_t pack_pair(int u, int v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

}  // namespace

int ModelConfig::total_vertices() const {
  int n = 0;
  for (int s : community_sizes) n += s;
  return n;
}

std::vector<int> ModelConfig::permutation() const {
  if (h.empty()) return identity_permutation(blocks);
  return h;
}

void ModelConfig::validate() const {
  if (community_sizes.empty()) throw std::invalid_argument("config: c must be at least 1");
  for (int s : community_sizes) {
    if (s < 1) throw std::invalid_argument("config: n_i entries must be positive");
  }
  if (blocks < 1) throw std::invalid_argument("config: b must be at least 1");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("config: q must be in [0,1]");
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("config: r must be in [0,1]");
  if (a < 0.0 || a > 1.0) throw std::invalid_argument("config: a must be in [0,1]");
  if (!h.empty()) {
    if (static_cast<int>(h.size()) != blocks) {
      throw std::invalid_argument("config: h must be a permutation of the b blocks");
    }
    if (!is_involution(h)) throw std::invalid_argument("config: h is not an involution");
  }
  if (degrees.has_value()) {
    if (degrees->communities.size() != community_sizes.size()) {
      throw std::invalid_argument("config: degrees_file community count does not match c");
    }
    for (std::size_t i = 0; i < community_sizes.size(); ++i) {
      if (static_cast<int>(degrees->communities[i].size()) != community_sizes[i]) {
        throw std::invalid_argument("config: degrees_file sizes do not match n_i");
      }
    }
  } else {
    if (gamma <= 1.0) throw std::invalid_argument("config: gamma must exceed 1");
    if (kmin < 1) throw std::invalid_argument("config: kmin must be at least 1");
    const int resolved_kmax = kmax > 0 ? kmax : total_vertices() - 1;
    if (kmin > resolved_kmax) throw std::invalid_argument("config: kmin exceeds kmax");
  }
}

long long CtcGraph::regular_edge_count() const {
  return static_cast<long long>(
      std::count_if(edges.begin(), edges.end(),
                    [](const Edge& e) { return e.kind == EdgeKind::Regular; }));
}

long long CtcGraph::transitive_edge_count() const {
  return static_cast<long long>(edges.size()) - regular_edge_count();
}

std::vector<std::vector<int>> CtcGraph::simple_adjacency(bool include_transitive) const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : edges) {
    if (e.kind == EdgeKind::Transitive && !include_transitive) continue;
    if (e.u == e.v) continue;
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return adj;
}

long long TypedBlocks::count_of(int block, std::uint8_t t) const {
  const auto& types = type[static_cast<std::size_t>(block)];
  return static_cast<long long>(std::count(types.begin(), types.end(), t));
}

TypedBlocks assign_stub_types(const BlockPartition& partition, double q, double r,
                              Rng& rng) {
  long long total_stubs = 0;
  for (const auto& block : partition.blocks) {
    total_stubs += static_cast<long long>(block.size());
  }
  const double b = static_cast<double>(partition.num_blocks);

  TypedBlocks typed;
  typed.type.resize(partition.blocks.size());
  for (std::size_t j = 0; j < partition.blocks.size(); ++j) {
    const std::size_t size = partition.blocks[j].size();
    long long n1 = ceil_count(static_cast<double>(total_stubs) * q * r / b);
    long long n2 = ceil_count(static_cast<double>(total_stubs) * (1.0 - q) * r / b);
    if (n1 > static_cast<long long>(size)) {
      n1 = static_cast<long long>(size);
      typed.clamped = true;
    }
    if (n1 + n2 > static_cast<long long>(size)) {
      n2 = static_cast<long long>(size) - n1;
      typed.clamped = true;
    }
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    auto& types = typed.type[j];
    types.assign(size, 3);
    for (long long i = 0; i < n1; ++i) types[order[static_cast<std::size_t>(i)]] = 1;
    for (long long i = n1; i < n1 + n2; ++i) types[order[static_cast<std::size_t>(i)]] = 2;
  }
  return typed;
}

namespace {

// Demote `count` uniformly chosen stubs of type `from` in one block to `to`.
void demote_in_block(std::vector<std::uint8_t>& types, std::uint8_t from,
                     std::uint8_t to, long long count, Rng& rng, long long& demoted) {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (types[i] == from) positions.push_back(i);
  }
  for (long long d = 0; d < count; ++d) {
    const std::size_t pick = rng.index(positions.size() - static_cast<std::size_t>(d));
    types[positions[pick]] = to;
    std::swap(positions[pick], positions[positions.size() - 1 - static_cast<std::size_t>(d)]);
    ++demoted;
  }
}

}  // namespace

void repair_stub_types(std::vector<TypedBlocks>& communities,
                       const std::vector<int>& h, Rng& rng) {
  const int b = static_cast<int>(h.size());
  for (std::size_t c = 0; c < communities.size(); ++c) {
    auto& typed = communities[c];
    // type-1 pools must pair up across (j, h(j)); surplus stubs fall back to
    // type 2 so intra-community stubs stay intra-community (keeps r=1 graphs
    // free of inter edges)
    for (int j = 0; j < b; ++j) {
      const int hj = h[static_cast<std::size_t>(j)];
      if (j == hj) {
        const long long count = typed.count_of(j, 1);
        if (count % 2 != 0) {
          demote_in_block(typed.type[static_cast<std::size_t>(j)], 1, 2, 1, rng,
                          typed.demoted);
        }
      } else if (j < hj) {
        const long long cj = typed.count_of(j, 1);
        const long long ch = typed.count_of(hj, 1);
        if (cj > ch) {
          demote_in_block(typed.type[static_cast<std::size_t>(j)], 1, 2, cj - ch, rng,
                          typed.demoted);
        } else if (ch > cj) {
          demote_in_block(typed.type[static_cast<std::size_t>(hj)], 1, 2, ch - cj, rng,
                          typed.demoted);
        }
      }
    }
    // per-community type-2 pool must be even
    long long type2 = 0;
    for (int j = 0; j < b; ++j) type2 += typed.count_of(j, 2);
    if (type2 % 2 != 0) {
      // uniform pick over the community's type-2 stubs
      long long pick = static_cast<long long>(rng.below(static_cast<std::uint64_t>(type2)));
      for (int j = 0; j < b && pick >= 0; ++j) {
        auto& types = typed.type[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < types.size() && pick >= 0; ++i) {
          if (types[i] == 2 && pick-- == 0) {
            types[i] = 3;
            ++typed.demoted;
          }
        }
      }
    }
  }
  // total stubs even, type-1 pools even, type-2 pools even -> type 3 even
  long long type3 = 0;
  for (const auto& typed : communities) {
    for (const auto& types : typed.type) {
      type3 += static_cast<long long>(std::count(types.begin(), types.end(), 3));
    }
  }
  if (type3 % 2 != 0) {
    // unreachable by the parity argument; demote one more type-2 stub if some
    // community still has one, otherwise the ledger is inconsistent
    for (auto& typed : communities) {
      for (auto& types : typed.type) {
        for (auto& t : types) {
          if (t == 2) {
            t = 3;
            ++typed.demoted;
            return;
          }
        }
      }
    }
    throw std::logic_error("repair_stub_types: odd type-3 pool with no type-2 stub left");
  }
}

std::vector<Edge> wire_regular_edges(const std::vector<TypedBlocks>& communities,
                                     const std::vector<BlockPartition>& partitions,
                                     const std::vector<int>& vertex_offsets,
                                     const std::vector<int>& h, Rng& rng) {
  const int b = static_cast<int>(h.size());
  std::vector<Edge> edges;

  const auto global_vertex = [&](std::size_t c, const Stub& s) {
    return vertex_offsets[c] + s.vertex;
  };
  const auto pool_of = [&](std::size_t c, int j, std::uint8_t t) {
    std::vector<int> pool;
    const auto& block = partitions[c].blocks[static_cast<std::size_t>(j)];
    const auto& types = communities[c].type[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (types[i] == t) pool.push_back(global_vertex(c, block[i]));
    }
    return pool;
  };
  const auto match_within = [&](std::vector<int>& pool) {
    if (pool.size() % 2 != 0) {
      throw std::logic_error("wire_regular_edges: odd pool after repair");
    }
    rng.shuffle(pool);
    for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
      edges.push_back({pool[i], pool[i + 1], EdgeKind::Regular});
    }
  };

  for (std::size_t c = 0; c < communities.size(); ++c) {
    // type 1: block j pairs with block h(j)
    for (int j = 0; j < b; ++j) {
      const int hj = h[static_cast<std::size_t>(j)];
      if (j == hj) {
        auto pool = pool_of(c, j, 1);
        match_within(pool);
      } else if (j < hj) {
        auto left = pool_of(c, j, 1);
        auto right = pool_of(c, hj, 1);
        if (left.size() != right.size()) {
          throw std::logic_error("wire_regular_edges: unbalanced type-1 pools after repair");
        }
        rng.shuffle(right);
        for (std::size_t i = 0; i < left.size(); ++i) {
          edges.push_back({left[i], right[i], EdgeKind::Regular});
        }
      }
    }
    // type 2: free within the community
    std::vector<int> pool2;
    for (int j = 0; j < b; ++j) {
      auto part = pool_of(c, j, 2);
      pool2.insert(pool2.end(), part.begin(), part.end());
    }
    match_within(pool2);
  }

  // type 3: free across the whole network
  std::vector<int> pool3;
  for (std::size_t c = 0; c < communities.size(); ++c) {
    for (int j = 0; j < b; ++j) {
      auto part = pool_of(c, j, 3);
      pool3.insert(pool3.end(), part.begin(), part.end());
    }
  }
  match_within(pool3);
  return edges;
}

std::vector<std::pair<int, int>> closure_candidate_pairs(
    const std::vector<std::vector<int>>& adj) {
  const auto adjacent = [&](int x, int y) {
    const auto& nx = adj[static_cast<std::size_t>(x)];
    return std::binary_search(nx.begin(), nx.end(), y);
  };
  std::vector<std::uint64_t> packed;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    const auto& nbrs = adj[v];
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        const int x = nbrs[i];
        const int y = nbrs[j];  // sorted lists keep x < y
        if (!adjacent(x, y)) packed.push_back(pack_pair(x, y));
      }
    }
  }
  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(packed.size());
  for (std::uint64_t p : packed) {
    pairs.emplace_back(static_cast<int>(p >> 32), static_cast<int>(p & 0xffffffffULL));
  }
  return pairs;
}

std::vector<Edge> apply_triadic_closure(const CtcGraph& graph, double a, Rng& rng) {
  const auto adj = graph.simple_adjacency(false);
  const auto candidates = closure_candidate_pairs(adj);
  std::vector<Edge> transitive;
  for (const auto& [u, v] : candidates) {
    if (rng.bernoulli(a)) transitive.push_back({u, v, EdgeKind::Transitive});
  }
  return transitive;
}

CtcGraph generate(const ModelConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const int c = static_cast<int>(config.community_sizes.size());
  const std::vector<int> h = config.permutation();

  DegreeSequence degrees;
  if (config.degrees.has_value()) {
    degrees = *config.degrees;
    // parity repair for explicit sequences whose community sums are odd
    for (auto& community : degrees.communities) {
      long long total = std::accumulate(community.begin(), community.end(), 0LL);
      if (total % 2 != 0) community[rng.index(community.size())] += 1;
    }
  } else {
    const int kmax = config.kmax > 0 ? config.kmax : config.total_vertices() - 1;
    degrees = sample_power_law_sequence(config.community_sizes, config.gamma,
                                        config.kmin, kmax, rng);
  }

  std::vector<BlockPartition> partitions;
  partitions.reserve(static_cast<std::size_t>(c));
  for (int i = 0; i < c; ++i) {
    partitions.push_back(partition_into_blocks(degrees.communities[static_cast<std::size_t>(i)],
                                               config.blocks, /*strict=*/false));
  }

  std::vector<TypedBlocks> typed;
  typed.reserve(static_cast<std::size_t>(c));
  for (int i = 0; i < c; ++i) {
    typed.push_back(assign_stub_types(partitions[static_cast<std::size_t>(i)],
                                      config.q, config.r, rng));
  }
  repair_stub_types(typed, h, rng);

  std::vector<int> offsets(static_cast<std::size_t>(c), 0);
  for (int i = 1; i < c; ++i) {
    offsets[static_cast<std::size_t>(i)] =
        offsets[static_cast<std::size_t>(i - 1)] + config.community_sizes[static_cast<std::size_t>(i - 1)];
  }

  CtcGraph graph;
  graph.n = config.total_vertices();
  graph.community.resize(static_cast<std::size_t>(graph.n));
  graph.regular_degree.assign(static_cast<std::size_t>(graph.n), 0);
  graph.transitive_degree.assign(static_cast<std::size_t>(graph.n), 0);
  for (int i = 0; i < c; ++i) {
    const int offset = offsets[static_cast<std::size_t>(i)];
    const auto& community_degrees = degrees.communities[static_cast<std::size_t>(i)];
    for (std::size_t v = 0; v < community_degrees.size(); ++v) {
      graph.community[static_cast<std::size_t>(offset) + v] = i;
      graph.regular_degree[static_cast<std::size_t>(offset) + v] = community_degrees[v];
    }
  }
  for (const auto& ty : typed) {
    graph.type_counts_clamped = graph.type_counts_clamped || ty.clamped;
    graph.demoted_stub_count += ty.demoted;
  }

  graph.edges = wire_regular_edges(typed, partitions, offsets, h, rng);

  // self-loop / multi-edge tallies over the regular wiring
  {
    std::vector<std::uint64_t> seen;
    seen.reserve(graph.edges.size());
    for (const Edge& e : graph.edges) {
      if (e.u == e.v) {
        ++graph.self_loop_count;
        continue;
      }
      seen.push_back(pack_pair(std::min(e.u, e.v), std::max(e.u, e.v)));
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i) {
      if (seen[i] == seen[i - 1]) ++graph.multi_edge_count;
    }
  }

  const auto transitive = apply_triadic_closure(graph, config.a, rng);
  for (const Edge& e : transitive) {
    graph.transitive_degree[static_cast<std::size_t>(e.u)] += 1;
    graph.transitive_degree[static_cast<std::size_t>(e.v)] += 1;
  }
  graph.edges.insert(graph.edges.end(), transitive.begin(), transitive.end());
  return graph;
}

}  // namespace ctc
