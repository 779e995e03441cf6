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

#include "sampler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "rng.hpp"

namespace batchlab {

namespace {

// Balanced quota per cluster: floor(N/C) with the remainder spread over the
// first clusters.
std::vector<NodeId> cluster_quotas(NodeId n, int c) {
  std::vector<NodeId> q(c, n / c);
  for (int i = 0; i < static_cast<int>(n % c); ++i) ++q[i];
  return q;
}

// Samples k distinct indices from [0, n) (Floyd's algorithm), returned sorted.
std::vector<NodeId> sample_distinct(NodeId n, int k, Rng& rng) {
  std::vector<NodeId> out;
  out.reserve(k);
  for (NodeId j = n - k; j < n; ++j) {
    NodeId t = static_cast<NodeId>(rng.below(j + 1));
    if (std::find(out.begin(), out.end(), t) != out.end()) {
      out.push_back(j);
    } else {
      out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BatchSampler::BatchSampler(const Graph& g, SamplerConfig cfg,
                           std::uint64_t seed)
    : g_(&g), cfg_(std::move(cfg)), seed_(seed) {
  const NodeId n = g.num_nodes();
  if (n == 0) throw Error("sampler: empty graph");
  switch (cfg_.kind) {
    case SamplerKind::rns:
      if (cfg_.num_parts < 1) throw Error("rns: num_parts must be >= 1");
      if (cfg_.num_parts > n) throw Error("rns: num_parts exceeds node count");
      break;
    case SamplerKind::cluster: {
      if (cfg_.num_clusters < 1 || cfg_.num_clusters > n) {
        throw Error("cluster: num_clusters out of range");
      }
      if (cfg_.clusters_per_batch < 1 ||
          cfg_.clusters_per_batch > cfg_.num_clusters) {
        throw Error("cluster: clusters_per_batch out of range");
      }
      // One-time seeded BFS region growing with balanced quotas (stands in
      // for a heavyweight partitioner; any locality-preserving balanced
      // partition serves the same role).
      const int c = cfg_.num_clusters;
      std::vector<NodeId> quota = cluster_quotas(n, c);
      cluster_of_.assign(n, -1);
      clusters_.assign(c, {});
      std::vector<NodeId> order(n);
      std::iota(order.begin(), order.end(), 0);
      Rng rng(derive_seed(seed_, "cluster_partition"));
      rng.shuffle(order);
      std::size_t cursor = 0;
      for (int k = 0; k < c; ++k) {
        std::deque<NodeId> frontier;
        while (static_cast<NodeId>(clusters_[k].size()) < quota[k]) {
          if (frontier.empty()) {
            while (cursor < order.size() && cluster_of_[order[cursor]] >= 0) {
              ++cursor;
            }
            if (cursor == order.size()) break;
            frontier.push_back(order[cursor]);
            cluster_of_[order[cursor]] = k;
            clusters_[k].push_back(order[cursor]);
            continue;
          }
          NodeId u = frontier.front();
          frontier.pop_front();
          for (NodeId v : g.neighbors(u)) {
            if (cluster_of_[v] < 0 &&
                static_cast<NodeId>(clusters_[k].size()) < quota[k]) {
              cluster_of_[v] = k;
              clusters_[k].push_back(v);
              frontier.push_back(v);
            }
          }
        }
      }
      break;
    }
    case SamplerKind::saint_rw:
      if (cfg_.walk_length < 1) throw Error("saint_rw: walk_length >= 1");
      if (cfg_.num_seeds < 1) throw Error("saint_rw: num_seeds >= 1");
      break;
    case SamplerKind::neighbor:
      if (cfg_.fanout.empty()) throw Error("neighbor: fanout must be set");
      for (int f : cfg_.fanout) {
        if (f < 1) throw Error("neighbor: fanout entries must be >= 1");
      }
      if (cfg_.batch_size < 1) throw Error("neighbor: batch_size >= 1");
      break;
    case SamplerKind::ladies:
      if (cfg_.budgets.empty()) throw Error("ladies: budgets must be set");
      for (int s : cfg_.budgets) {
        if (s < 1) throw Error("ladies: budget entries must be >= 1");
      }
      if (cfg_.batch_size < 1) throw Error("ladies: batch_size >= 1");
      break;
    case SamplerKind::none:
      throw Error("sampler: kind not set");
  }
  if (cfg_.kind == SamplerKind::neighbor || cfg_.kind == SamplerKind::ladies) {
    train_nodes_ = g.nodes_with_split(Split::train);
    if (train_nodes_.empty()) {
      throw Error("sampler: graph has no training nodes to seed from");
    }
  }
}

int BatchSampler::steps_per_epoch() const {
  const NodeId n = g_->num_nodes();
  switch (cfg_.kind) {
    case SamplerKind::rns:
      return cfg_.num_parts;
    case SamplerKind::cluster:
      return cfg_.num_clusters / cfg_.clusters_per_batch;
    case SamplerKind::saint_rw:
      return std::max<int>(
          1, static_cast<int>(n / (static_cast<std::int64_t>(cfg_.num_seeds) *
                                   cfg_.walk_length)));
    case SamplerKind::neighbor:
    case SamplerKind::ladies: {
      std::int64_t t = static_cast<std::int64_t>(train_nodes_.size());
      return static_cast<int>((t + cfg_.batch_size - 1) / cfg_.batch_size);
    }
    default:
      return 0;
  }
}

std::vector<Batch> BatchSampler::epoch_batches(int epoch) const {
  switch (cfg_.kind) {
    case SamplerKind::rns: return rns_epoch(epoch);
    case SamplerKind::cluster: return cluster_epoch(epoch);
    case SamplerKind::saint_rw: return saint_epoch(epoch);
    case SamplerKind::neighbor: return neighbor_epoch(epoch);
    case SamplerKind::ladies: return ladies_epoch(epoch);
    default: throw Error("sampler: kind not set");
  }
}

std::vector<Batch> BatchSampler::rns_epoch(int epoch) const {
  const NodeId n = g_->num_nodes();
  const int m = cfg_.num_parts;
  const NodeId block = n / m;  // trailing n mod m nodes are dropped
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(derive_seed(seed_, "rns", static_cast<std::uint64_t>(epoch)));
  rng.shuffle(perm);
  std::vector<Batch> out;
  out.reserve(m);
  for (int k = 0; k < m; ++k) {
    std::span<const NodeId> nodes(perm.data() + static_cast<std::size_t>(k) * block,
                                  static_cast<std::size_t>(block));
    out.push_back(induced_subgraph(*g_, nodes, SamplerKind::rns));
  }
  return out;
}

std::vector<Batch> BatchSampler::cluster_epoch(int epoch) const {
  std::vector<int> order(cfg_.num_clusters);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed_, "cluster", static_cast<std::uint64_t>(epoch)));
  rng.shuffle(order);
  const int steps = cfg_.num_clusters / cfg_.clusters_per_batch;
  std::vector<Batch> out;
  out.reserve(steps);
  std::vector<NodeId> nodes;
  for (int s = 0; s < steps; ++s) {
    nodes.clear();
    for (int j = 0; j < cfg_.clusters_per_batch; ++j) {
      const auto& cl = clusters_[order[s * cfg_.clusters_per_batch + j]];
      nodes.insert(nodes.end(), cl.begin(), cl.end());
    }
    out.push_back(induced_subgraph(*g_, nodes, SamplerKind::cluster));
  }
  return out;
}

std::vector<Batch> BatchSampler::saint_epoch(int epoch) const {
  const NodeId n = g_->num_nodes();
  const int steps = steps_per_epoch();
  std::vector<Batch> out;
  out.reserve(steps);
  std::vector<char> seen(n, 0);
  std::vector<NodeId> visited;
  for (int s = 0; s < steps; ++s) {
    Rng rng(derive_seed(seed_, "saint", static_cast<std::uint64_t>(epoch),
                        static_cast<std::uint64_t>(s)));
    visited.clear();
    auto visit = [&](NodeId v) {
      if (!seen[v]) {
        seen[v] = 1;
        visited.push_back(v);
      }
    };
    for (int w = 0; w < cfg_.num_seeds; ++w) {
      NodeId cur = static_cast<NodeId>(rng.below(n));
      visit(cur);
      for (int t = 0; t < cfg_.walk_length; ++t) {
        int deg = g_->degree(cur);
        if (deg == 0) break;  // walk halts at an isolated dead end
        cur = g_->neighbors(cur)[rng.below(deg)];
        visit(cur);
      }
    }
    for (NodeId v : visited) seen[v] = 0;
    out.push_back(induced_subgraph(*g_, visited, SamplerKind::saint_rw));
  }
  return out;
}

namespace {

// Layer-stack builder shared by the neighbor and ladies samplers. Node lists
// grow by appending; every hop's destination set is the prefix accumulated so
// far, which keeps local row i aligned across layers.
struct LayerStackBuilder {
  explicit LayerStackBuilder(const Graph& g, std::vector<NodeId> seeds)
      : graph(&g), nodes(std::move(seeds)), pos(g.num_nodes(), -1) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      pos[nodes[i]] = static_cast<NodeId>(i);
    }
  }

  NodeId add_node(NodeId global) {
    if (pos[global] >= 0) return pos[global];
    pos[global] = static_cast<NodeId>(nodes.size());
    nodes.push_back(global);
    return pos[global];
  }

  Batch finish(SamplerKind tag, std::vector<LayerAdj> hops) const {
    Batch b;
    b.tag = tag;
    b.mode = BatchMode::layered;
    b.global_ids = nodes;
    // Hops were built seed-outward; the model consumes them outer-inward.
    b.layers.assign(hops.rbegin(), hops.rend());
    NodeId seeds = b.layers.back().num_dst;
    b.train_targets.resize(seeds);
    std::iota(b.train_targets.begin(), b.train_targets.end(), 0);
    return b;
  }

  const Graph* graph;
  std::vector<NodeId> nodes;
  std::vector<NodeId> pos;
};

struct EdgeRec {
  NodeId dst;
  NodeId src;
  double w_norm;
  double w_mean;
};

LayerAdj pack_layer(NodeId num_src, NodeId num_dst,
                    std::vector<EdgeRec>& edges) {
  std::stable_sort(edges.begin(), edges.end(),
                   [](const EdgeRec& a, const EdgeRec& b) {
                     return a.dst != b.dst ? a.dst < b.dst : a.src < b.src;
                   });
  LayerAdj adj;
  adj.num_src = num_src;
  adj.num_dst = num_dst;
  adj.offsets.assign(num_dst + 1, 0);
  for (const auto& e : edges) ++adj.offsets[e.dst + 1];
  for (NodeId i = 0; i < num_dst; ++i) adj.offsets[i + 1] += adj.offsets[i];
  adj.nbr.resize(edges.size());
  adj.w_norm.resize(edges.size());
  adj.w_mean.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj.nbr[e] = edges[e].src;
    adj.w_norm[e] = edges[e].w_norm;
    adj.w_mean[e] = edges[e].w_mean;
  }
  return adj;
}

}  // namespace

std::vector<Batch> BatchSampler::neighbor_epoch(int epoch) const {
  std::vector<NodeId> seeds_pool = train_nodes_;
  Rng order_rng(
      derive_seed(seed_, "neighbor_order", static_cast<std::uint64_t>(epoch)));
  order_rng.shuffle(seeds_pool);

  const int L = static_cast<int>(cfg_.fanout.size());
  std::vector<Batch> out;
  const int steps = steps_per_epoch();
  out.reserve(steps);
  for (int s = 0; s < steps; ++s) {
    Rng rng(derive_seed(seed_, "neighbor", static_cast<std::uint64_t>(epoch),
                        static_cast<std::uint64_t>(s)));
    std::size_t lo = static_cast<std::size_t>(s) * cfg_.batch_size;
    std::size_t hi = std::min(seeds_pool.size(), lo + cfg_.batch_size);
    LayerStackBuilder builder(
        *g_, std::vector<NodeId>(seeds_pool.begin() + lo,
                                 seeds_pool.begin() + hi));
    std::vector<LayerAdj> hops;
    std::vector<EdgeRec> edges;
    for (int h = 0; h < L; ++h) {
      const int fan = cfg_.fanout[h];
      const NodeId num_dst = static_cast<NodeId>(builder.nodes.size());
      edges.clear();
      for (NodeId i = 0; i < num_dst; ++i) {
        const NodeId gi = builder.nodes[i];
        auto nbrs = g_->neighbors(gi);
        const int deg = static_cast<int>(nbrs.size());
        const int take = std::min(fan, deg);
        const double mean_w = take > 0 ? 1.0 / take : 0.0;
        if (take == deg) {
          for (NodeId u : nbrs) {
            NodeId j = builder.add_node(u);
            edges.push_back({i, j, g_->norm_adj_entry(gi, u), mean_w});
          }
        } else {
          for (NodeId idx : sample_distinct(deg, take, rng)) {
            NodeId u = nbrs[idx];
            NodeId j = builder.add_node(u);
            edges.push_back({i, j, g_->norm_adj_entry(gi, u), mean_w});
          }
        }
        edges.push_back({i, i, g_->norm_adj_entry(gi, gi), 0.0});
      }
      hops.push_back(pack_layer(static_cast<NodeId>(builder.nodes.size()),
                                num_dst, edges));
    }
    out.push_back(builder.finish(SamplerKind::neighbor, std::move(hops)));
  }
  return out;
}

std::vector<Batch> BatchSampler::ladies_epoch(int epoch) const {
  std::vector<NodeId> seeds_pool = train_nodes_;
  Rng order_rng(
      derive_seed(seed_, "ladies_order", static_cast<std::uint64_t>(epoch)));
  order_rng.shuffle(seeds_pool);

  const int L = static_cast<int>(cfg_.budgets.size());
  std::vector<Batch> out;
  const int steps = steps_per_epoch();
  out.reserve(steps);
  for (int s = 0; s < steps; ++s) {
    Rng rng(derive_seed(seed_, "ladies", static_cast<std::uint64_t>(epoch),
                        static_cast<std::uint64_t>(s)));
    std::size_t lo = static_cast<std::size_t>(s) * cfg_.batch_size;
    std::size_t hi = std::min(seeds_pool.size(), lo + cfg_.batch_size);
    LayerStackBuilder builder(
        *g_, std::vector<NodeId>(seeds_pool.begin() + lo,
                                 seeds_pool.begin() + hi));
    std::vector<LayerAdj> hops;
    std::vector<EdgeRec> edges;
    // scale[j]: importance-sampling correction 1/(k p_j) for freshly sampled
    // nodes of the current hop; 1 for carried-over nodes.
    std::vector<double> scale(g_->num_nodes(), 1.0);
    for (int h = 0; h < L; ++h) {
      const NodeId num_dst = static_cast<NodeId>(builder.nodes.size());

      // Candidate pool: 1-hop neighbors of the current set, excluding it.
      std::vector<NodeId> pool;
      std::vector<double> q;
      std::vector<NodeId> pool_index(g_->num_nodes(), -1);
      for (NodeId i = 0; i < num_dst; ++i) {
        const NodeId gi = builder.nodes[i];
        for (NodeId u : g_->neighbors(gi)) {
          if (builder.pos[u] >= 0 && builder.pos[u] < num_dst) continue;
          double a = g_->norm_adj_entry(u, gi);
          if (pool_index[u] < 0) {
            pool_index[u] = static_cast<NodeId>(pool.size());
            pool.push_back(u);
            q.push_back(a * a);
          } else {
            q[pool_index[u]] += a * a;
          }
        }
      }

      std::vector<NodeId> sampled;
      if (!pool.empty()) {
        const int budget = cfg_.budgets[h];
        const int k = std::min<std::int64_t>(budget, pool.size());
        if (k == static_cast<int>(pool.size())) {
          sampled = pool;  // no subsampling, no reweighting
          for (NodeId u : sampled) scale[u] = 1.0;
        } else {
          const double q_total = std::accumulate(q.begin(), q.end(), 0.0);
          std::vector<double> w = q;
          double w_total = q_total;
          std::vector<char> taken(pool.size(), 0);
          for (int draw = 0; draw < k; ++draw) {
            double x = rng.unit() * w_total;
            std::size_t pick = 0;
            double acc = 0.0;
            for (std::size_t j = 0; j < pool.size(); ++j) {
              if (taken[j]) continue;
              acc += w[j];
              pick = j;
              if (x < acc) break;
            }
            taken[pick] = 1;
            w_total -= w[pick];
            sampled.push_back(pool[pick]);
            // Correction uses the original inclusion probability.
            scale[pool[pick]] = q_total / (k * q[pick]);
          }
        }
        for (NodeId u : sampled) builder.add_node(u);
      }

      // Edges into the current set from sampled + carried nodes.
      const NodeId num_src = static_cast<NodeId>(builder.nodes.size());
      edges.clear();
      for (NodeId i = 0; i < num_dst; ++i) {
        const NodeId gi = builder.nodes[i];
        int present = 0;
        for (NodeId u : g_->neighbors(gi)) {
          if (builder.pos[u] >= 0 && builder.pos[u] < num_src) ++present;
        }
        const double mean_w = present > 0 ? 1.0 / present : 0.0;
        for (NodeId u : g_->neighbors(gi)) {
          NodeId j = builder.pos[u];
          if (j < 0 || j >= num_src) continue;
          double carried = j < num_dst ? 1.0 : scale[u];
          edges.push_back({i, j, g_->norm_adj_entry(gi, u) * carried, mean_w});
        }
        edges.push_back({i, i, g_->norm_adj_entry(gi, gi), 0.0});
      }
      hops.push_back(pack_layer(num_src, num_dst, edges));
    }
    out.push_back(builder.finish(SamplerKind::ladies, std::move(hops)));
  }
  return out;
}

}  // namespace batchlab
