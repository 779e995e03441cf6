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

#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "rng.hpp"
#include "util.hpp"

namespace batchlab {

const char* sampler_kind_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::none: return "none";
    case SamplerKind::rns: return "rns";
    case SamplerKind::cluster: return "cluster";
    case SamplerKind::saint_rw: return "saint_rw";
    case SamplerKind::neighbor: return "neighbor";
    case SamplerKind::ladies: return "ladies";
  }
  return "?";
}

EdgeIndex Batch::num_induced_edges() const {
  if (mode != BatchMode::induced) {
    throw Error("num_induced_edges: batch is not in induced mode");
  }
  const LayerAdj& adj = layers[0];
  EdgeIndex non_self = 0;
  for (NodeId i = 0; i < adj.num_dst; ++i) {
    for (EdgeIndex e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
      if (adj.nbr[e] != i) ++non_self;
    }
  }
  return non_self / 2;
}

namespace {

// Symmetric adjacency with explicit self entries over the subgraph induced by
// `nodes` (local order preserved). `pos` must map global id -> local id for
// members and -1 otherwise.
LayerAdj build_induced_adj(const Graph& g, std::span<const NodeId> nodes,
                           const std::vector<NodeId>& pos) {
  const NodeId n = static_cast<NodeId>(nodes.size());
  LayerAdj adj;
  adj.num_src = n;
  adj.num_dst = n;

  std::vector<int> sub_deg(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId u : g.neighbors(nodes[i])) {
      if (pos[u] >= 0) ++sub_deg[i];
    }
  }

  adj.offsets.resize(n + 1);
  adj.offsets[0] = 0;
  for (NodeId i = 0; i < n; ++i) {
    adj.offsets[i + 1] = adj.offsets[i] + sub_deg[i] + 1;  // +1 self entry
  }
  adj.nbr.resize(adj.offsets[n]);
  adj.w_norm.resize(adj.offsets[n]);
  adj.w_mean.resize(adj.offsets[n]);

  std::vector<NodeId> row;
  for (NodeId i = 0; i < n; ++i) {
    row.clear();
    for (NodeId u : g.neighbors(nodes[i])) {
      if (pos[u] >= 0) row.push_back(pos[u]);
    }
    row.push_back(i);  // self entry
    std::sort(row.begin(), row.end());
    const double di = static_cast<double>(sub_deg[i]);
    EdgeIndex e = adj.offsets[i];
    for (NodeId j : row) {
      adj.nbr[e] = j;
      if (j == i) {
        adj.w_norm[e] = 1.0 / (di + 1.0);
        adj.w_mean[e] = 0.0;
      } else {
        adj.w_norm[e] =
            1.0 / std::sqrt((di + 1.0) * (sub_deg[j] + 1.0));
        adj.w_mean[e] = 1.0 / di;
      }
      ++e;
    }
  }
  return adj;
}

Batch make_induced_batch(const Graph& g, std::span<const NodeId> nodes,
                         const std::vector<NodeId>& pos, SamplerKind tag) {
  Batch b;
  b.tag = tag;
  b.mode = BatchMode::induced;
  b.global_ids.assign(nodes.begin(), nodes.end());
  b.layers.push_back(build_induced_adj(g, nodes, pos));
  for (NodeId i = 0; i < static_cast<NodeId>(nodes.size()); ++i) {
    if (g.split_of(nodes[i]) == Split::train) b.train_targets.push_back(i);
  }
  return b;
}

}  // namespace

Graph build_graph(const std::vector<std::pair<NodeId, NodeId>>& edges,
                  Mat features, std::vector<int> labels,
                  std::vector<Split> split) {
  const NodeId n = static_cast<NodeId>(labels.size());
  if (features.rows() != n) {
    throw Error("build_graph: feature matrix has " +
                std::to_string(features.rows()) + " rows for " +
                std::to_string(n) + " nodes");
  }
  if (static_cast<NodeId>(split.size()) != n) {
    throw Error("build_graph: split array size mismatch");
  }
  int num_classes = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (labels[v] < 0) {
      throw Error("build_graph: negative label at node " + std::to_string(v));
    }
    num_classes = std::max(num_classes, labels[v] + 1);
  }

  // Symmetrize, drop self-loops, dedupe, sort.
  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw Error("build_graph: edge (" + std::to_string(u) + "," +
                  std::to_string(v) + ") out of range");
    }
    if (u == v) continue;
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.num_nodes_ = n;
  g.num_classes_ = num_classes;
  g.features_ = std::move(features);
  g.labels_ = std::move(labels);
  g.split_ = std::move(split);
  g.offsets_.assign(n + 1, 0);
  for (const auto& [u, v] : arcs) ++g.offsets_[u + 1];
  for (NodeId v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
  g.neighbors_.resize(arcs.size());
  {
    std::vector<EdgeIndex> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : arcs) g.neighbors_[cursor[u]++] = v;
  }

  std::vector<NodeId> all(n);
  for (NodeId v = 0; v < n; ++v) all[v] = v;
  g.full_view_ = make_induced_batch(g, all, all, SamplerKind::none);
  return g;
}

Graph with_split(const Graph& g, std::vector<Split> split) {
  if (static_cast<NodeId>(split.size()) != g.num_nodes()) {
    throw Error("with_split: split size mismatch");
  }
  Graph out = g;
  out.split_ = std::move(split);
  out.full_view_.train_targets.clear();
  for (NodeId v = 0; v < out.num_nodes_; ++v) {
    if (out.split_[v] == Split::train) out.full_view_.train_targets.push_back(v);
  }
  return out;
}

std::vector<NodeId> Graph::nodes_with_split(Split s) const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < num_nodes_; ++v) {
    if (split_[v] == s) out.push_back(v);
  }
  return out;
}

double Graph::norm_adj_entry(NodeId u, NodeId v) const {
  const double du = degree(u) + 1.0;
  if (u == v) return 1.0 / du;
  return 1.0 / std::sqrt(du * (degree(v) + 1.0));
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Batch induced_subgraph(const Graph& g, std::span<const NodeId> nodes,
                       SamplerKind tag) {
  std::vector<NodeId> pos(g.num_nodes(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    NodeId v = nodes[i];
    if (v < 0 || v >= g.num_nodes()) {
      throw Error("induced_subgraph: node " + std::to_string(v) +
                  " out of range");
    }
    if (pos[v] >= 0) {
      throw Error("induced_subgraph: duplicate node " + std::to_string(v));
    }
    pos[v] = static_cast<NodeId>(i);
  }
  return make_induced_batch(g, nodes, pos, tag);
}

namespace {

// CSR view shared by Graph- and Batch-based metric code. Self entries are
// already removed.
struct PlainCsr {
  NodeId n = 0;
  std::vector<EdgeIndex> offsets;
  std::vector<NodeId> nbr;
  std::vector<int> labels;
};

PlainCsr plain_csr(const Graph& g) {
  PlainCsr c;
  c.n = g.num_nodes();
  c.offsets = g.offsets();
  c.nbr = g.neighbor_array();
  c.labels = g.labels();
  return c;
}

PlainCsr plain_csr(const Graph& g, const Batch& b) {
  if (b.mode != BatchMode::induced) {
    throw Error("structural metrics require an induced-mode batch");
  }
  const LayerAdj& adj = b.layers[0];
  PlainCsr c;
  c.n = adj.num_dst;
  c.offsets.assign(c.n + 1, 0);
  for (NodeId i = 0; i < c.n; ++i) {
    EdgeIndex deg = 0;
    for (EdgeIndex e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
      if (adj.nbr[e] != i) ++deg;
    }
    c.offsets[i + 1] = c.offsets[i] + deg;
  }
  c.nbr.resize(c.offsets[c.n]);
  EdgeIndex out = 0;
  for (NodeId i = 0; i < c.n; ++i) {
    for (EdgeIndex e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
      if (adj.nbr[e] != i) c.nbr[out++] = adj.nbr[e];
    }
  }
  c.labels.resize(c.n);
  for (NodeId i = 0; i < c.n; ++i) c.labels[i] = g.labels()[b.global_ids[i]];
  return c;
}

// Single-source BFS; returns (distances, eccentricity, farthest node).
// Unreachable nodes get -1. Farthest ties break toward the smaller index.
struct BfsResult {
  std::vector<int> dist;
  int ecc = 0;
  NodeId farthest = 0;
};

BfsResult bfs(const PlainCsr& c, NodeId source) {
  BfsResult r;
  r.dist.assign(c.n, -1);
  r.dist[source] = 0;
  r.farthest = source;
  std::deque<NodeId> queue{source};
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (EdgeIndex e = c.offsets[u]; e < c.offsets[u + 1]; ++e) {
      NodeId v = c.nbr[e];
      if (r.dist[v] < 0) {
        r.dist[v] = r.dist[u] + 1;
        if (r.dist[v] > r.ecc) {
          r.ecc = r.dist[v];
          r.farthest = v;
        }
        queue.push_back(v);
      }
    }
  }
  return r;
}

NodeId count_components(const PlainCsr& c) {
  std::vector<char> seen(c.n, 0);
  NodeId components = 0;
  std::deque<NodeId> queue;
  for (NodeId s = 0; s < c.n; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    queue.push_back(s);
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      for (EdgeIndex e = c.offsets[u]; e < c.offsets[u + 1]; ++e) {
        NodeId v = c.nbr[e];
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
  }
  return components;
}

StructuralStats stats_of(const PlainCsr& c, int bfs_samples,
                         std::uint64_t rng_seed) {
  if (c.n == 0) throw Error("structural_stats: empty graph");
  if (bfs_samples < 1) throw Error("structural_stats: bfs_samples must be >= 1");

  StructuralStats s;
  s.num_edges = c.offsets[c.n] / 2;
  s.avg_degree = 2.0 * static_cast<double>(s.num_edges) / c.n;
  for (NodeId v = 0; v < c.n; ++v) {
    if (c.offsets[v + 1] == c.offsets[v]) ++s.num_isolated;
  }
  s.num_components = count_components(c);

  EdgeIndex homophilic = 0;
  for (NodeId u = 0; u < c.n; ++u) {
    for (EdgeIndex e = c.offsets[u]; e < c.offsets[u + 1]; ++e) {
      NodeId v = c.nbr[e];
      if (u < v && c.labels[u] == c.labels[v]) ++homophilic;
    }
  }
  s.edge_homophily =
      s.num_edges > 0 ? static_cast<double>(homophilic) / s.num_edges : 0.0;

  // Multi-sweep BFS: restart each sweep from the farthest node found so far;
  // fall back to a fresh random source when the sweep stops making progress.
  Rng rng(rng_seed);
  std::vector<char> used_source(c.n, 0);
  NodeId source = static_cast<NodeId>(rng.below(c.n));
  double dist_sum = 0.0;
  std::int64_t dist_count = 0;
  for (int sweep = 0; sweep < bfs_samples; ++sweep) {
    used_source[source] = 1;
    BfsResult r = bfs(c, source);
    s.diameter_lower_bound = std::max(s.diameter_lower_bound, r.ecc);
    for (NodeId v = 0; v < c.n; ++v) {
      if (v != source && r.dist[v] > 0) {
        dist_sum += r.dist[v];
        ++dist_count;
      }
    }
    NodeId next = r.farthest;
    if (used_source[next]) next = static_cast<NodeId>(rng.below(c.n));
    source = next;
  }
  s.avg_distance_estimate = dist_count > 0 ? dist_sum / dist_count : 0.0;
  return s;
}

}  // namespace

StructuralStats structural_stats(const Graph& g, int bfs_samples,
                                 std::uint64_t rng_seed) {
  return stats_of(plain_csr(g), bfs_samples, rng_seed);
}

StructuralStats structural_stats(const Graph& g, const Batch& batch,
                                 int bfs_samples, std::uint64_t rng_seed) {
  return stats_of(plain_csr(g, batch), bfs_samples, rng_seed);
}

std::pair<int, double> exact_distance_stats(const Graph& g) {
  if (g.num_nodes() > 2000) {
    throw Error("exact_distance_stats: graph too large for all-pairs BFS");
  }
  if (g.num_nodes() == 0) throw Error("exact_distance_stats: empty graph");
  PlainCsr c = plain_csr(g);
  int diameter = 0;
  double sum = 0.0;
  std::int64_t count = 0;
  for (NodeId s = 0; s < c.n; ++s) {
    BfsResult r = bfs(c, s);
    diameter = std::max(diameter, r.ecc);
    for (NodeId v = 0; v < c.n; ++v) {
      if (v != s && r.dist[v] > 0) {
        sum += r.dist[v];
        ++count;
      }
    }
  }
  return {diameter, count > 0 ? sum / count : 0.0};
}

namespace {
std::map<int, NodeId> histogram_from_degrees(const std::vector<int>& degs) {
  std::map<int, NodeId> h;
  for (int d : degs) ++h[d];
  return h;
}
}  // namespace

std::vector<int> degree_list(const Graph& g) {
  std::vector<int> degs(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) degs[v] = g.degree(v);
  return degs;
}

std::vector<int> degree_list(const Batch& batch) {
  if (batch.mode != BatchMode::induced) {
    throw Error("degree_list: batch is not in induced mode");
  }
  const LayerAdj& adj = batch.layers[0];
  std::vector<int> degs(adj.num_dst, 0);
  for (NodeId i = 0; i < adj.num_dst; ++i) {
    for (EdgeIndex e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
      if (adj.nbr[e] != i) ++degs[i];
    }
  }
  return degs;
}

std::map<int, NodeId> degree_histogram(const Graph& g) {
  return histogram_from_degrees(degree_list(g));
}

std::map<int, NodeId> degree_histogram(const Batch& batch) {
  return histogram_from_degrees(degree_list(batch));
}

std::vector<std::pair<NodeId, NodeId>> load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list: " + path);
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (char& ch : line) {
      if (ch == ',' || ch == '\t') ch = ' ';
    }
    if (line.find_first_not_of(" \r\n") == std::string::npos) continue;
    std::istringstream ss(line);
    long long u, v;
    if (!(ss >> u)) {
      throw Error(path + ": malformed edge at line " + std::to_string(line_no));
    }
    std::string rest;
    if (!(ss >> v) || (ss >> rest) || u < 0 || v < 0) {
      throw Error(path + ": malformed edge at line " + std::to_string(line_no));
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return edges;
}

void write_stats_csv(const std::string& path, const std::string& name,
                     NodeId num_nodes, const StructuralStats& s) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "name,num_nodes,num_edges,avg_degree,num_isolated,num_components,"
         "diameter_lb,avg_dist,homophily\n";
  out << name << ',' << num_nodes << ',' << s.num_edges << ','
      << fmt_g(s.avg_degree) << ',' << s.num_isolated << ','
      << s.num_components << ',' << s.diameter_lower_bound << ','
      << fmt_g(s.avg_distance_estimate) << ',' << fmt_g(s.edge_homophily)
      << '\n';
}

}  // namespace batchlab
