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

#ifndef BATCHLAB_GENERATE_HPP_
#define BATCHLAB_GENERATE_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "graph.hpp"

namespace batchlab {

enum class GenKind { barabasi_albert, sbm, erdos_renyi };

// Synthetic graph recipe. Labels: SBM uses block ids; BA/ER draw uniform
// labels over num_classes. Features are class-conditional Gaussians around
// unit-norm random means with noise sigma feature_noise.
struct GenConfig {
  GenKind kind = GenKind::sbm;
  NodeId n = 0;

  int attach_degree = 2;               // barabasi_albert
  std::vector<NodeId> block_sizes;     // sbm
  double p_in = 0.0, p_out = 0.0;      // sbm
  double edge_prob = 0.0;              // erdos_renyi
  int num_classes = 2;                 // BA / ER label count

  int feature_dim = 8;
  double feature_noise = 0.5;
  std::array<double, 3> split_fractions = {0.5, 0.25, 0.25};
  std::uint64_t seed = 0;
};

// Deterministic given cfg (all randomness derives from cfg.seed).
Graph generate_graph(const GenConfig& cfg);

// Reassigns split tags only; everything else is preserved.
Graph resplit(const Graph& g, const std::array<double, 3>& fractions,
              std::uint64_t seed);

// Largest-remainder split sizes for n nodes; ties break in category order
// (train, val, test). Exposed for tests.
std::array<NodeId, 3> split_sizes(NodeId n, const std::array<double, 3>& f);

}  // namespace batchlab

#endif  // BATCHLAB_GENERATE_HPP_
