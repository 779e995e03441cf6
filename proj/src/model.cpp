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

#include "model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rng.hpp"
#include "util.hpp"

namespace batchlab {

namespace {

std::vector<int> layer_dims(const ModelConfig& cfg, int input_dim) {
  std::vector<int> dims(cfg.depth + 1);
  dims[0] = input_dim;
  for (int l = 1; l < cfg.depth; ++l) dims[l] = cfg.hidden_dim;
  dims[cfg.depth] = cfg.num_classes;
  return dims;
}

const LayerAdj& adj_for_layer(const ModelConfig& cfg, const Batch& batch,
                              int layer) {
  if (batch.mode == BatchMode::induced) return batch.layers[0];
  if (static_cast<int>(batch.layers.size()) != cfg.depth) {
    throw Error("model: layered batch has " +
                std::to_string(batch.layers.size()) + " layers for depth " +
                std::to_string(cfg.depth));
  }
  return batch.layers[layer];
}

// Z[i] = sum_j w(i,j) H[j] over the layer's edges.
Mat aggregate(const LayerAdj& adj, const std::vector<double>& w,
              const Mat& h) {
  Mat z = Mat::Zero(adj.num_dst, h.cols());
  for (NodeId i = 0; i < adj.num_dst; ++i) {
    for (EdgeIndex e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
      if (w[e] != 0.0) z.row(i) += w[e] * h.row(adj.nbr[e]);
    }
  }
  return z;
}

// Transpose of aggregate: scatters dst-gradients back to sources.
Mat aggregate_t(const LayerAdj& adj, const std::vector<double>& w,
                const Mat& gz) {
  Mat gh = Mat::Zero(adj.num_src, gz.cols());
  for (NodeId i = 0; i < adj.num_dst; ++i) {
    for (EdgeIndex e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
      if (w[e] != 0.0) gh.row(adj.nbr[e]) += w[e] * gz.row(i);
    }
  }
  return gh;
}

struct ForwardCache {
  // Per layer: input features H, aggregated messages M, pre-activation Z.
  std::vector<Mat> h, m, z;
  Mat logits;
};

int params_per_layer(Arch arch) { return arch == Arch::gcn ? 2 : 3; }

ForwardCache run_forward(const Vec& w, const ModelConfig& cfg, const Graph& g,
                         const Batch& batch, const ParamShapes& shapes) {
  if (g.feature_dim() == 0) throw Error("model: graph has no features");
  ForwardCache cache;
  const NodeId base = adj_for_layer(cfg, batch, 0).num_src;
  if (batch.mode == BatchMode::layered &&
      base != static_cast<NodeId>(batch.global_ids.size())) {
    throw Error("model: layer stack does not cover the batch node set");
  }

  Mat h(base, g.feature_dim());
  for (NodeId i = 0; i < base; ++i) {
    h.row(i) = g.features().row(batch.global_ids[i]);
  }

  const int per_layer = params_per_layer(cfg.arch);
  for (int l = 0; l < cfg.depth; ++l) {
    const LayerAdj& adj = adj_for_layer(cfg, batch, l);
    if (adj.num_src != h.rows()) {
      throw Error("model: adjacency/source size mismatch at layer " +
                  std::to_string(l));
    }
    cache.h.push_back(h);
    Mat z;
    if (cfg.arch == Arch::gcn) {
      auto W = shapes.block(w, l * per_layer);
      auto b = shapes.block(w, l * per_layer + 1);
      Mat m = aggregate(adj, adj.w_norm, h);
      cache.m.push_back(m);
      z = m * W;
      z.rowwise() += b.row(0);
    } else {
      auto W_self = shapes.block(w, l * per_layer);
      auto W_nbr = shapes.block(w, l * per_layer + 1);
      auto b = shapes.block(w, l * per_layer + 2);
      Mat m = aggregate(adj, adj.w_mean, h);
      cache.m.push_back(m);
      z = h.topRows(adj.num_dst) * W_self + m * W_nbr;
      z.rowwise() += b.row(0);
    }
    cache.z.push_back(z);
    const bool last = (l == cfg.depth - 1);
    if (!last && cfg.act == Activation::relu) {
      h = z.cwiseMax(0.0);
    } else {
      h = z;
    }
  }
  cache.logits = h;
  return cache;
}

double ce_loss_and_dlogits(const Mat& logits, const Graph& g,
                           const Batch& batch, Mat* dlogits) {
  if (batch.train_targets.empty()) {
    throw Error("model: batch has no train targets");
  }
  const double inv_t = 1.0 / static_cast<double>(batch.train_targets.size());
  double loss = 0.0;
  if (dlogits) *dlogits = Mat::Zero(logits.rows(), logits.cols());
  for (NodeId t : batch.train_targets) {
    const int y = g.labels()[batch.global_ids[t]];
    const auto row = logits.row(t);
    const double zmax = row.maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < row.size(); ++c) {
      sum += std::exp(row(c) - zmax);
    }
    const double logz = zmax + std::log(sum);
    loss += (logz - row(y)) * inv_t;
    if (dlogits) {
      for (Eigen::Index c = 0; c < row.size(); ++c) {
        double p = std::exp(row(c) - logz);
        (*dlogits)(t, c) = (p - (c == y ? 1.0 : 0.0)) * inv_t;
      }
    }
  }
  return loss;
}

}  // namespace

Eigen::Map<const Mat> ParamShapes::block(const Vec& w, int index) const {
  const Entry& e = entries[index];
  return {w.data() + e.offset, e.rows, e.cols};
}

Eigen::Map<Mat> ParamShapes::block(Vec& w, int index) const {
  const Entry& e = entries[index];
  return {w.data() + e.offset, e.rows, e.cols};
}

ParamShapes make_shapes(const ModelConfig& cfg, int input_dim) {
  if (cfg.depth < 1) throw Error("model: depth must be >= 1");
  if (cfg.hidden_dim < 1 || cfg.num_classes < 1 || input_dim < 1) {
    throw Error("model: dimensions must be positive");
  }
  ParamShapes shapes;
  auto dims = layer_dims(cfg, input_dim);
  auto add = [&](const std::string& name, int r, int c) {
    shapes.entries.push_back({name, r, c, shapes.total});
    shapes.total += static_cast<std::int64_t>(r) * c;
  };
  for (int l = 0; l < cfg.depth; ++l) {
    const std::string suffix = std::to_string(l);
    if (cfg.arch == Arch::gcn) {
      add("W" + suffix, dims[l], dims[l + 1]);
      add("b" + suffix, 1, dims[l + 1]);
    } else {
      add("Wself" + suffix, dims[l], dims[l + 1]);
      add("Wnbr" + suffix, dims[l], dims[l + 1]);
      add("b" + suffix, 1, dims[l + 1]);
    }
  }
  return shapes;
}

Vec init_params(const ModelConfig& cfg, int input_dim, std::uint64_t seed) {
  ParamShapes shapes = make_shapes(cfg, input_dim);
  Vec w(shapes.total);
  Rng rng(derive_seed(seed, "init"));
  for (const auto& e : shapes.entries) {
    const double bound =
        e.name[0] == 'b' ? 0.0 : cfg.init_scale / std::sqrt(e.rows);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(e.rows) * e.cols;
         ++i) {
      w[e.offset + i] = bound * (2.0 * rng.unit() - 1.0);
    }
  }
  return w;
}

Mat forward_logits(const Vec& w, const ModelConfig& cfg, const Graph& g,
                   const Batch& batch) {
  ParamShapes shapes = make_shapes(cfg, g.feature_dim());
  if (w.size() != shapes.total) throw Error("model: parameter size mismatch");
  return run_forward(w, cfg, g, batch, shapes).logits;
}

double loss_value(const Vec& w, const ModelConfig& cfg, const Graph& g,
                  const Batch& batch) {
  ParamShapes shapes = make_shapes(cfg, g.feature_dim());
  if (w.size() != shapes.total) throw Error("model: parameter size mismatch");
  ForwardCache cache = run_forward(w, cfg, g, batch, shapes);
  return ce_loss_and_dlogits(cache.logits, g, batch, nullptr);
}

LossGrad loss_and_grad(const Vec& w, const ModelConfig& cfg, const Graph& g,
                       const Batch& batch) {
  ParamShapes shapes = make_shapes(cfg, g.feature_dim());
  if (w.size() != shapes.total) throw Error("model: parameter size mismatch");
  ForwardCache cache = run_forward(w, cfg, g, batch, shapes);

  LossGrad out;
  Mat dz;
  out.loss = ce_loss_and_dlogits(cache.logits, g, batch, &dz);
  out.grad = Vec::Zero(shapes.total);

  const int per_layer = params_per_layer(cfg.arch);
  for (int l = cfg.depth - 1; l >= 0; --l) {
    const LayerAdj& adj = adj_for_layer(cfg, batch, l);
    const bool last = (l == cfg.depth - 1);
    if (!last && cfg.act == Activation::relu) {
      dz.array() *= (cache.z[l].array() > 0.0).cast<double>();
    }
    Mat dh_in;
    if (cfg.arch == Arch::gcn) {
      auto W = shapes.block(out.grad, l * per_layer);  // gradient blocks
      auto b = shapes.block(out.grad, l * per_layer + 1);
      auto Wv = shapes.block(w, l * per_layer);
      W += cache.m[l].transpose() * dz;
      b.row(0) += dz.colwise().sum();
      Mat dm = dz * Wv.transpose();
      dh_in = aggregate_t(adj, adj.w_norm, dm);
    } else {
      auto W_self = shapes.block(out.grad, l * per_layer);
      auto W_nbr = shapes.block(out.grad, l * per_layer + 1);
      auto b = shapes.block(out.grad, l * per_layer + 2);
      auto Wsv = shapes.block(w, l * per_layer);
      auto Wnv = shapes.block(w, l * per_layer + 1);
      W_self += cache.h[l].topRows(adj.num_dst).transpose() * dz;
      W_nbr += cache.m[l].transpose() * dz;
      b.row(0) += dz.colwise().sum();
      dh_in = aggregate_t(adj, adj.w_mean, dz * Wnv.transpose());
      dh_in.topRows(adj.num_dst) += dz * Wsv.transpose();
    }
    dz = std::move(dh_in);
  }
  return out;
}

Vec fd_grad(const Vec& w, const ModelConfig& cfg, const Graph& g,
            const Batch& batch, double h) {
  if (h <= 0) throw Error("fd_grad: h must be positive");
  Vec grad(w.size());
  Vec wp = w;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double orig = wp[i];
    wp[i] = orig + h;
    const double up = loss_value(wp, cfg, g, batch);
    wp[i] = orig - h;
    const double down = loss_value(wp, cfg, g, batch);
    wp[i] = orig;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

Vec hessian_vec(const Vec& w, const ModelConfig& cfg, const Graph& g,
                const Batch& batch, const Vec& direction, double h) {
  const double norm = direction.norm();
  if (norm == 0.0) return Vec::Zero(w.size());
  const Vec unit = direction / norm;
  const Vec gp = loss_and_grad(w + h * unit, cfg, g, batch).grad;
  const Vec gm = loss_and_grad(w - h * unit, cfg, g, batch).grad;
  return (norm / (2.0 * h)) * (gp - gm);
}

Vec modified_grad(const Vec& w, const ModelConfig& cfg, const Graph& g,
                  std::span<const Batch> batches, double eps, double hvp_h) {
  if (batches.empty()) throw Error("modified_grad: no batches");
  if (eps < 0) throw Error("modified_grad: eps must be >= 0");
  const double m = static_cast<double>(batches.size());
  Vec mean_grad = Vec::Zero(w.size());
  std::vector<Vec> grads;
  grads.reserve(batches.size());
  for (const Batch& b : batches) {
    grads.push_back(loss_and_grad(w, cfg, g, b).grad);
    mean_grad += grads.back();
  }
  mean_grad /= m;
  if (eps == 0.0) return mean_grad;
  Vec out = mean_grad;
  for (std::size_t k = 0; k < batches.size(); ++k) {
    out += (eps / (2.0 * m)) *
           hessian_vec(w, cfg, g, batches[k], grads[k], hvp_h);
  }
  return out;
}

void save_checkpoint(const std::string& path, const ModelConfig& cfg,
                     const ParamShapes& shapes, const Vec& w) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint: " + path);
  out << "params,v1," << (cfg.arch == Arch::gcn ? "gcn" : "sage_mean") << ','
      << cfg.depth << '\n';
  for (const auto& e : shapes.entries) {
    out << "shape," << e.name << ',' << e.rows << ',' << e.cols << '\n';
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    out << fmt_g(w[i], 17) << '\n';
  }
}

Vec load_checkpoint(const std::string& path, const ModelConfig& cfg,
                    const ParamShapes& shapes) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("checkpoint: empty file");
  std::string expect_header =
      std::string("params,v1,") + (cfg.arch == Arch::gcn ? "gcn" : "sage_mean") +
      ',' + std::to_string(cfg.depth);
  if (line != expect_header) throw Error("checkpoint: header mismatch");
  for (const auto& e : shapes.entries) {
    if (!std::getline(in, line)) throw Error("checkpoint: truncated shapes");
    std::string expect = "shape," + e.name + ',' + std::to_string(e.rows) +
                         ',' + std::to_string(e.cols);
    if (line != expect) throw Error("checkpoint: shape mismatch: " + line);
  }
  Vec w(shapes.total);
  for (std::int64_t i = 0; i < shapes.total; ++i) {
    if (!std::getline(in, line)) throw Error("checkpoint: truncated values");
    w[i] = std::stod(line);
  }
  return w;
}

}  // namespace batchlab
