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

#ifndef BATCHLAB_GRAPH_HPP_
#define BATCHLAB_GRAPH_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace batchlab {

using NodeId = std::int32_t;
using EdgeIndex = std::int64_t;
// Feature matrices are row-major: one row per node.
using Mat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Split : std::uint8_t { train = 0, val = 1, test = 2 };

enum class SamplerKind { none, rns, cluster, saint_rw, neighbor, ladies };

const char* sampler_kind_name(SamplerKind kind);

// One message-passing adjacency. Rows are destination nodes, columns are
// source nodes, both in batch-local indexing. The destination set is always
// the prefix src[0..num_dst) of the source set, so H_out[i] and H_in[i] refer
// to the same node.
//
// Two weight columns are stored per directed edge:
//   w_norm: degree-normalized weights, 1/sqrt((d_i+1)(d_j+1)) on real edges
//           and 1/(d_i+1) on the explicit self entry (i -> i).
//   w_mean: 1/d_i on real edges, 0 on self entries (neighbor averaging).
struct LayerAdj {
  NodeId num_src = 0;
  NodeId num_dst = 0;
  std::vector<EdgeIndex> offsets;  // size num_dst + 1
  std::vector<NodeId> nbr;         // source-local column index
  std::vector<double> w_norm;
  std::vector<double> w_mean;
};

enum class BatchMode { induced, layered };

// A sampled mini-batch. In induced mode there is a single symmetric adjacency
// (layers[0]) over global_ids; in layered mode there is one directed
// adjacency per model layer, consumed bottom-up, whose node sets are nested
// prefixes of global_ids.
struct Batch {
  SamplerKind tag = SamplerKind::none;
  BatchMode mode = BatchMode::induced;
  std::vector<NodeId> global_ids;    // layer-0 source nodes (global indices)
  std::vector<LayerAdj> layers;      // size 1 in induced mode
  std::vector<NodeId> train_targets; // local indices into the final dst set

  NodeId num_nodes() const { return static_cast<NodeId>(global_ids.size()); }
  // Number of output rows produced by a forward pass over this batch.
  NodeId num_outputs() const { return layers.back().num_dst; }
  // Undirected edge count of the induced adjacency (self entries excluded).
  EdgeIndex num_induced_edges() const;
};

struct StructuralStats {
  EdgeIndex num_edges = 0;  // undirected edges, counted once
  double avg_degree = 0.0;
  NodeId num_isolated = 0;
  NodeId num_components = 0;
  int diameter_lower_bound = 0;
  double avg_distance_estimate = 0.0;
  double edge_homophily = 0.0;
};

// Immutable undirected graph in CSR form with node features, labels and a
// train/val/test split. Neighbor lists are sorted ascending, contain no
// self-loops and no duplicates, and every edge is stored in both directions.
class Graph {
 public:
  Graph() = default;

  NodeId num_nodes() const { return num_nodes_; }
  EdgeIndex num_edges() const {
    return static_cast<EdgeIndex>(neighbors_.size()) / 2;
  }
  int num_classes() const { return num_classes_; }
  int feature_dim() const { return static_cast<int>(features_.cols()); }

  int degree(NodeId v) const {
    return static_cast<int>(offsets_[v + 1] - offsets_[v]);
  }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }
  const std::vector<EdgeIndex>& offsets() const { return offsets_; }
  const std::vector<NodeId>& neighbor_array() const { return neighbors_; }
  const Mat& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<Split>& split() const { return split_; }
  Split split_of(NodeId v) const { return split_[v]; }

  std::vector<NodeId> nodes_with_split(Split s) const;

  // Whole-graph view usable wherever a Batch is expected (identity mapping,
  // every train node is a target). Built once at construction.
  const Batch& full_view() const { return full_view_; }

  // Symmetric normalized adjacency entry for the full graph,
  // 1/sqrt((d_u+1)(d_v+1)); u == v gives the self-loop entry.
  double norm_adj_entry(NodeId u, NodeId v) const;

  bool has_edge(NodeId u, NodeId v) const;

  friend Graph build_graph(const std::vector<std::pair<NodeId, NodeId>>& edges,
                           Mat features, std::vector<int> labels,
                           std::vector<Split> split);
  friend Graph with_split(const Graph& g, std::vector<Split> split);

 private:
  NodeId num_nodes_ = 0;
  std::vector<EdgeIndex> offsets_;
  std::vector<NodeId> neighbors_;
  Mat features_;
  std::vector<int> labels_;
  std::vector<Split> split_;
  int num_classes_ = 0;
  Batch full_view_;
};

// Canonicalizes an edge list into a Graph: symmetrizes, removes self-loops
// and duplicates, sorts neighbor lists. Throws Error on out-of-range indices,
// ragged features, or negative labels.
Graph build_graph(const std::vector<std::pair<NodeId, NodeId>>& edges,
                  Mat features, std::vector<int> labels,
                  std::vector<Split> split);

// Copy of g with a different split (all other members shared semantics).
Graph with_split(const Graph& g, std::vector<Split> split);

// Induced subgraph over `nodes` (kept in the given order). An edge survives
// iff both endpoints are in `nodes`. Throws on duplicates or range errors.
Batch induced_subgraph(const Graph& g, std::span<const NodeId> nodes,
                       SamplerKind tag = SamplerKind::none);

// Structural metrics with BFS-sampled distance estimates: bfs_samples sweeps,
// each restarted from the farthest node found by the previous sweep.
StructuralStats structural_stats(const Graph& g, int bfs_samples,
                                 std::uint64_t rng_seed);
// Same metrics on an induced batch (labels via global ids).
StructuralStats structural_stats(const Graph& g, const Batch& batch,
                                 int bfs_samples, std::uint64_t rng_seed);

// Exact diameter / mean same-component distance by all-pairs BFS. Test oracle;
// refuses graphs with more than 2000 nodes.
std::pair<int, double> exact_distance_stats(const Graph& g);

std::map<int, NodeId> degree_histogram(const Graph& g);
std::map<int, NodeId> degree_histogram(const Batch& batch);
// Plain degree list (induced batches: self entries excluded).
std::vector<int> degree_list(const Graph& g);
std::vector<int> degree_list(const Batch& batch);

// Parses "u v" / "u,v" lines; '#' starts a comment. Throws Error with the
// offending line number on malformed input.
std::vector<std::pair<NodeId, NodeId>> load_edge_list(const std::string& path);

// CSV export with fixed header:
// name,num_nodes,num_edges,avg_degree,num_isolated,num_components,diameter_lb,avg_dist,homophily
void write_stats_csv(const std::string& path, const std::string& name,
                     NodeId num_nodes, const StructuralStats& stats);

}  // namespace batchlab

#endif  // BATCHLAB_GRAPH_HPP_
