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

#ifndef BATCHLAB_MODEL_HPP_
#define BATCHLAB_MODEL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"

namespace batchlab {

enum class Arch { gcn, sage_mean };
enum class Activation { relu, identity };

struct ModelConfig {
  Arch arch = Arch::gcn;
  int depth = 2;
  int hidden_dim = 16;
  int num_classes = 2;
  Activation act = Activation::relu;
  double init_scale = 1.0;  // uniform(+-scale/sqrt(fan_in))
};

// Layout of the flat parameter vector: a named (rows x cols) block per
// weight/bias. flatten(unflatten(w)) == w by construction.
struct ParamShapes {
  struct Entry {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::int64_t offset = 0;
  };
  std::vector<Entry> entries;
  std::int64_t total = 0;

  Eigen::Map<const Mat> block(const Vec& w, int index) const;
  Eigen::Map<Mat> block(Vec& w, int index) const;
};

ParamShapes make_shapes(const ModelConfig& cfg, int input_dim);
Vec init_params(const ModelConfig& cfg, int input_dim, std::uint64_t seed);

struct LossGrad {
  double loss = 0.0;
  Vec grad;
};

// Forward pass over the adjacency view of `batch` (use g.full_view() for the
// whole graph). GCN layers aggregate with degree-normalized self-loop
// weights; sage_mean combines a self transform with the neighbor mean (zero
// vector on empty neighborhoods). The final layer has no activation. Returns
// one logits row per output node of the view.
Mat forward_logits(const Vec& w, const ModelConfig& cfg, const Graph& g,
                   const Batch& batch);

// Mean softmax cross-entropy over the batch's train targets.
double loss_value(const Vec& w, const ModelConfig& cfg, const Graph& g,
                  const Batch& batch);

// Loss and exact reverse-mode gradient.
LossGrad loss_and_grad(const Vec& w, const ModelConfig& cfg, const Graph& g,
                       const Batch& batch);

// Central-difference gradient, the independent oracle for loss_and_grad.
Vec fd_grad(const Vec& w, const ModelConfig& cfg, const Graph& g,
            const Batch& batch, double h);

// Hessian-vector product by central differences of the exact gradient:
// (grad(w + h v) - grad(w - h v)) / (2h). The perturbation is rescaled to
// unit direction norm internally, which keeps the truncation error
// independent of |v|.
Vec hessian_vec(const Vec& w, const ModelConfig& cfg, const Graph& g,
                const Batch& batch, const Vec& direction, double h = 1e-5);

// Gradient of the step-size-modified objective over a batch set:
//   mean_k grad_k + (eps / (2m)) * sum_k H_k grad_k,
// which for a single whole-graph batch reduces to
//   grad + (eps/2) H grad.
Vec modified_grad(const Vec& w, const ModelConfig& cfg, const Graph& g,
                  std::span<const Batch> batches, double eps,
                  double hvp_h = 1e-5);

void save_checkpoint(const std::string& path, const ModelConfig& cfg,
                     const ParamShapes& shapes, const Vec& w);
Vec load_checkpoint(const std::string& path, const ModelConfig& cfg,
                    const ParamShapes& shapes);

}  // namespace batchlab

#endif  // BATCHLAB_MODEL_HPP_
