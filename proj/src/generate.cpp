// Copyright 2026 The batchlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rng.hpp"

namespace batchlab {

namespace {

void validate(const GenConfig& cfg) {
  if (cfg.n < 1) throw Error("generate: n must be >= 1");
  double total = cfg.split_fractions[0] + cfg.split_fractions[1] +
                 cfg.split_fractions[2];
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error("generate: split fractions must sum to 1");
  }
  for (double f : cfg.split_fractions) {
    if (f < 0.0) throw Error("generate: negative split fraction");
  }
  switch (cfg.kind) {
    case GenKind::barabasi_albert:
      if (cfg.attach_degree < 1) throw Error("generate: attach_degree >= 1");
      if (cfg.n < cfg.attach_degree + 1) {
        throw Error("generate: n too small for attach_degree");
      }
      break;
    case GenKind::sbm: {
      if (cfg.block_sizes.empty()) throw Error("generate: sbm needs blocks");
      NodeId sum = std::accumulate(cfg.block_sizes.begin(),
                                   cfg.block_sizes.end(), NodeId{0});
      if (sum != cfg.n) throw Error("generate: sbm block sizes must sum to n");
      if (cfg.p_in < 0 || cfg.p_in > 1 || cfg.p_out < 0 || cfg.p_out > 1) {
        throw Error("generate: sbm probabilities must lie in [0,1]");
      }
      break;
    }
    case GenKind::erdos_renyi:
      if (cfg.edge_prob < 0 || cfg.edge_prob > 1) {
        throw Error("generate: edge probability must lie in [0,1]");
      }
      break;
  }
  if (cfg.feature_dim < 1) throw Error("generate: feature_dim >= 1");
}

std::vector<std::pair<NodeId, NodeId>> gen_ba_edges(NodeId n, int attach,
                                                    Rng& rng) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> endpoints;  // degree-proportional sampling pool
  const NodeId clique = attach + 1;
  for (NodeId u = 0; u < clique; ++u) {
    for (NodeId v = u + 1; v < clique; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> chosen;
  for (NodeId v = clique; v < n; ++v) {
    chosen.clear();
    while (static_cast<int>(chosen.size()) < attach) {
      NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
        chosen.push_back(t);
      }
    }
    for (NodeId t : chosen) {
      edges.emplace_back(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return edges;
}

// Bernoulli(p) over a pair range via geometric skips.
template <typename EmitFn>
void sample_pairs(std::int64_t count, double p, Rng& rng, const EmitFn& emit) {
  if (p <= 0.0 || count <= 0) return;
  if (p >= 1.0) {
    for (std::int64_t i = 0; i < count; ++i) emit(i);
    return;
  }
  const double log1mp = std::log1p(-p);
  std::int64_t i = -1;
  for (;;) {
    double u = rng.unit();
    i += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-u) / log1mp));
    if (i >= count) return;
    emit(i);
  }
}

// Maps a linear index to the (u,v) pair with u < v < n.
std::pair<NodeId, NodeId> unrank_pair(std::int64_t idx, NodeId n) {
  // Row u owns (n-1-u) pairs; walk rows. n is desk-scale so this stays cheap
  // via the closed-form inversion below.
  double nn = static_cast<double>(n);
  double ud = nn - 2 -
              std::floor(std::sqrt(-8.0 * static_cast<double>(idx) +
                                   4.0 * nn * (nn - 1) - 7.0) /
                             2.0 -
                         0.5);
  ud = std::clamp(ud, 0.0, nn - 2);
  NodeId u = static_cast<NodeId>(ud);
  auto row_start = [&](NodeId r) {
    return static_cast<std::int64_t>(r) * (n - 1) -
           static_cast<std::int64_t>(r) * (r - 1) / 2 - r;
  };
  while (u > 0 && row_start(u) > idx) --u;
  while (row_start(u + 1) <= idx) ++u;
  NodeId v = static_cast<NodeId>(idx - row_start(u)) + u + 1;
  return {u, v};
}

}  // namespace

std::array<NodeId, 3> split_sizes(NodeId n, const std::array<double, 3>& f) {
  std::array<NodeId, 3> sizes;
  std::array<double, 3> remainder;
  NodeId assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double exact = f[i] * n;
    sizes[i] = static_cast<NodeId>(std::floor(exact + 1e-9));
    remainder[i] = exact - sizes[i];
    assigned += sizes[i];
  }
  // Distribute leftovers by largest remainder, ties in category order.
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (int i = 0; assigned < n; ++i) {
    ++sizes[order[i % 3]];
    ++assigned;
  }
  return sizes;
}

namespace {

std::vector<Split> make_split(NodeId n, const std::array<double, 3>& fractions,
                              std::uint64_t seed) {
  auto sizes = split_sizes(n, fractions);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(perm);
  std::vector<Split> split(n);
  NodeId i = 0;
  for (int s = 0; s < 3; ++s) {
    for (NodeId k = 0; k < sizes[s]; ++k) {
      split[perm[i++]] = static_cast<Split>(s);
    }
  }
  return split;
}

Mat make_features(const std::vector<int>& labels, int num_classes, int dim,
                  double noise, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "features"));
  Mat means(num_classes, dim);
  for (int c = 0; c < num_classes; ++c) {
    double norm2 = 0.0;
    for (int j = 0; j < dim; ++j) {
      means(c, j) = rng.normal();
      norm2 += means(c, j) * means(c, j);
    }
    means.row(c) /= std::sqrt(std::max(norm2, 1e-300));
  }
  Mat x(static_cast<Eigen::Index>(labels.size()), dim);
  for (Eigen::Index v = 0; v < x.rows(); ++v) {
    for (int j = 0; j < dim; ++j) {
      x(v, j) = means(labels[v], j) + noise * rng.normal();
    }
  }
  return x;
}

}  // namespace

Graph generate_graph(const GenConfig& cfg) {
  validate(cfg);
  Rng edge_rng(derive_seed(cfg.seed, "edges"));
  Rng label_rng(derive_seed(cfg.seed, "labels"));

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<int> labels(cfg.n);
  int num_classes = cfg.num_classes;

  switch (cfg.kind) {
    case GenKind::barabasi_albert: {
      edges = gen_ba_edges(cfg.n, cfg.attach_degree, edge_rng);
      for (auto& y : labels) y = static_cast<int>(label_rng.below(num_classes));
      break;
    }
    case GenKind::sbm: {
      num_classes = static_cast<int>(cfg.block_sizes.size());
      std::vector<NodeId> block_start(cfg.block_sizes.size() + 1, 0);
      for (std::size_t b = 0; b < cfg.block_sizes.size(); ++b) {
        block_start[b + 1] = block_start[b] + cfg.block_sizes[b];
        for (NodeId v = block_start[b]; v < block_start[b + 1]; ++v) {
          labels[v] = static_cast<int>(b);
        }
      }
      const int nb = num_classes;
      for (int a = 0; a < nb; ++a) {
        // Within-block pairs.
        NodeId na = cfg.block_sizes[a];
        std::int64_t pairs = static_cast<std::int64_t>(na) * (na - 1) / 2;
        sample_pairs(pairs, cfg.p_in, edge_rng, [&](std::int64_t idx) {
          auto [u, v] = unrank_pair(idx, na);
          edges.emplace_back(block_start[a] + u, block_start[a] + v);
        });
        // Cross-block pairs.
        for (int b = a + 1; b < nb; ++b) {
          NodeId nbs = cfg.block_sizes[b];
          std::int64_t cross = static_cast<std::int64_t>(na) * nbs;
          sample_pairs(cross, cfg.p_out, edge_rng, [&](std::int64_t idx) {
            NodeId u = static_cast<NodeId>(idx / nbs);
            NodeId v = static_cast<NodeId>(idx % nbs);
            edges.emplace_back(block_start[a] + u, block_start[b] + v);
          });
        }
      }
      break;
    }
    case GenKind::erdos_renyi: {
      std::int64_t pairs =
          static_cast<std::int64_t>(cfg.n) * (cfg.n - 1) / 2;
      sample_pairs(pairs, cfg.edge_prob, edge_rng, [&](std::int64_t idx) {
        edges.push_back(unrank_pair(idx, cfg.n));
      });
      for (auto& y : labels) y = static_cast<int>(label_rng.below(num_classes));
      break;
    }
  }

  Mat features = make_features(labels, num_classes, cfg.feature_dim,
                               cfg.feature_noise, cfg.seed);
  std::vector<Split> split = make_split(cfg.n, cfg.split_fractions, cfg.seed);
  return build_graph(edges, std::move(features), std::move(labels),
                     std::move(split));
}

Graph resplit(const Graph& g, const std::array<double, 3>& fractions,
              std::uint64_t seed) {
  double total = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(total - 1.0) > 1e-9 || fractions[0] < 0 || fractions[1] < 0 ||
      fractions[2] < 0) {
    throw Error("resplit: invalid fractions");
  }
  return with_split(g, make_split(g.num_nodes(), fractions, seed));
}

}  // namespace batchlab
