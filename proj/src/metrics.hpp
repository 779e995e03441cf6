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

#ifndef BATCHLAB_METRICS_HPP_
#define BATCHLAB_METRICS_HPP_

#include <span>
#include <vector>

#include "graph.hpp"
#include "model.hpp"

namespace batchlab {

// The step-size-modified-objective quantities at a parameter point, computed
// from a set of batches:
//   L_bar          mean of per-batch losses
//   bias_abs       |L_full - L_bar|
//   loss_variance  population variance of per-batch losses
//   grad_bar_norm_sq  ||mean batch gradient||^2
//   grad_variance  (1/m) sum_k ||g_k - g_bar||^2  (the chained-update
//                  regularizer; equals mean ||g_k||^2 - ||g_bar||^2, an
//                  identity asserted on every call)
struct RegularizationReport {
  double L_full = 0.0;
  double L_bar = 0.0;
  double bias_abs = 0.0;
  double loss_variance = 0.0;
  double grad_bar_norm_sq = 0.0;
  double grad_variance = 0.0;
  std::vector<double> per_batch_losses;
  int m_effective = 0;  // batches with at least one train target
};

// Batches without train targets are skipped (m_effective excludes them);
// throws if none remain.
RegularizationReport measure_regularization(const Vec& w,
                                            const ModelConfig& cfg,
                                            const Graph& g,
                                            std::span<const Batch> batches);

// L_bar + (eps/4)||grad_bar||^2 + (eps/4) * grad_variance. With a single
// whole-graph batch this is the full-batch modified objective
// L + (eps/4)||grad L||^2.
double modified_loss_value(const Vec& w, const ModelConfig& cfg,
                           const Graph& g, std::span<const Batch> batches,
                           double eps);

// Monte Carlo estimate of the worst-case expected output deviation caused by
// restricting message passing to a batch: max over train nodes v of the mean
// over batches containing v of ||f_batch[v] - f_full[v]||.
double edge_removal_sensitivity(const Vec& w, const ModelConfig& cfg,
                                const Graph& g,
                                std::span<const Batch> batches);

}  // namespace batchlab

#endif  // BATCHLAB_METRICS_HPP_
