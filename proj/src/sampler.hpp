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

#ifndef BATCHLAB_SAMPLER_HPP_
#define BATCHLAB_SAMPLER_HPP_

#include <cstdint>
#include <vector>

#include "graph.hpp"

namespace batchlab {

struct SamplerConfig {
  SamplerKind kind = SamplerKind::rns;

  int num_parts = 2;            // rns: m

  int num_clusters = 10;        // cluster: C
  int clusters_per_batch = 1;   // cluster: clusters drawn per step

  int walk_length = 2;          // saint_rw: steps per walk
  int num_seeds = 100;          // saint_rw: walks per batch

  std::vector<int> fanout;      // neighbor: per-hop neighbor cap
  std::vector<int> budgets;     // ladies: per-hop node budget
  int batch_size = 512;         // neighbor / ladies: seed nodes per batch
};

// Produces one epoch of mini-batches at a time. Batch streams are
// reproducible bit-for-bit from (graph, config, seed): every epoch and step
// draws from an independently derived RNG stream.
class BatchSampler {
 public:
  BatchSampler(const Graph& g, SamplerConfig cfg, std::uint64_t seed);

  // Ordered batches of epoch `epoch`. RNS partitions a fresh permutation into
  // num_parts blocks (trailing N mod m nodes dropped); cluster draws
  // disjoint groups of clusters from a fixed one-time partition; saint_rw runs
  // num_seeds random walks per step; neighbor/ladies cover the shuffled
  // training set once per epoch.
  std::vector<Batch> epoch_batches(int epoch) const;

  int steps_per_epoch() const;
  const SamplerConfig& config() const { return cfg_; }
  SamplerKind kind() const { return cfg_.kind; }

  // Cluster id per node for the cluster kind (empty otherwise).
  const std::vector<NodeId>& cluster_assignment() const {
    return cluster_of_;
  }

 private:
  std::vector<Batch> rns_epoch(int epoch) const;
  std::vector<Batch> cluster_epoch(int epoch) const;
  std::vector<Batch> saint_epoch(int epoch) const;
  std::vector<Batch> neighbor_epoch(int epoch) const;
  std::vector<Batch> ladies_epoch(int epoch) const;

  const Graph* g_;
  SamplerConfig cfg_;
  std::uint64_t seed_;
  std::vector<std::vector<NodeId>> clusters_;  // cluster kind only
  std::vector<NodeId> cluster_of_;
  std::vector<NodeId> train_nodes_;            // neighbor / ladies seed pool
};

}  // namespace batchlab

#endif  // BATCHLAB_SAMPLER_HPP_
