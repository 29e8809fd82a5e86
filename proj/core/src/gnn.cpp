// SPDX-License-Identifier: Apache-2.0
#include "aigsage/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "aigsage/worker_pool.hpp"

namespace aigsage {

namespace {

// Below this work estimate the pool dispatch costs more than it saves.
constexpr std::uint64_t kParallelWorkThreshold = 1u << 16;

WorkerPool* pool_for(const spmm::CsrMatrix<double>& m, std::uint32_t f) {
  return m.nnz() * f >= kParallelWorkThreshold ? &default_pool() : nullptr;
}

RowMat spmm_apply(const spmm::CsrMatrix<double>& m, const spmm::SpmmPlan& plan, const RowMat& x) {
  RowMat out(m.rows, x.cols());
  spmm::execute(plan, m, x.data(), static_cast<std::uint32_t>(x.cols()), out.data(),
                pool_for(m, static_cast<std::uint32_t>(x.cols())));
  return out;
}

struct ForwardCache {
  std::vector<RowMat> h;  // depth + 1 activations, h[0] = features
  std::vector<RowMat> m;  // aggregated neighbor means per layer
  std::vector<RowMat> z;  // pre-activations per layer
  RowMat logits;
};

void run_forward(const Model& model, const SageContext& ctx, ForwardCache& cache) {
  const std::size_t depth = model.layers.size();
  cache.h.resize(depth + 1);
  cache.m.resize(depth);
  cache.z.resize(depth);
  cache.h[0] = ctx.features;
  for (std::size_t l = 0; l < depth; ++l) {
    const SageLayer& layer = model.layers[l];
    cache.m[l] = spmm_apply(ctx.a_mean, ctx.plan, cache.h[l]);
    cache.z[l] = cache.h[l] * layer.w_self + cache.m[l] * layer.w_neigh;
    cache.z[l].rowwise() += layer.bias;
    cache.h[l + 1] = cache.z[l].cwiseMax(0.0);
  }
  cache.logits = cache.h[depth] * model.w_out;
  cache.logits.rowwise() += model.b_out;
}

/// Row-wise softmax cross entropy against ctx.labels, averaged over nodes.
/// Fills prob with the softmax when requested.
double softmax_loss(const RowMat& logits, const std::vector<std::uint8_t>& labels, RowMat* prob) {
  const Eigen::Index n = logits.rows();
  double loss = 0.0;
  if (prob) prob->resize(n, logits.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = logits.row(i).maxCoeff();
    const Eigen::Array<double, 1, Eigen::Dynamic> e = (logits.row(i).array() - mx).exp();
    const double denom = e.sum();
    loss -= std::log(e[labels[i]] / denom);
    if (prob) prob->row(i) = (e / denom).matrix();
  }
  return loss / static_cast<double>(n);
}

std::vector<double*> param_views(Model& m, std::vector<std::size_t>* sizes = nullptr) {
  std::vector<double*> views;
  auto add = [&](auto& mat) {
    views.push_back(mat.data());
    if (sizes) sizes->push_back(static_cast<std::size_t>(mat.size()));
  };
  for (SageLayer& l : m.layers) {
    add(l.w_self);
    add(l.w_neigh);
    add(l.bias);
  }
  add(m.w_out);
  add(m.b_out);
  return views;
}

Grads zero_grads_like(const Model& m) {
  Grads g;
  g.layers.resize(m.layers.size());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    g.layers[l].w_self = RowMat::Zero(m.layers[l].w_self.rows(), m.layers[l].w_self.cols());
    g.layers[l].w_neigh = RowMat::Zero(m.layers[l].w_neigh.rows(), m.layers[l].w_neigh.cols());
    g.layers[l].bias = RowVec::Zero(m.layers[l].bias.cols());
  }
  g.w_out = RowMat::Zero(m.w_out.rows(), m.w_out.cols());
  g.b_out = RowVec::Zero(m.b_out.cols());
  return g;
}

std::vector<double*> grad_views(Grads& g) {
  std::vector<double*> views;
  for (SageLayer& l : g.layers) {
    views.push_back(l.w_self.data());
    views.push_back(l.w_neigh.data());
    views.push_back(l.bias.data());
  }
  views.push_back(g.w_out.data());
  views.push_back(g.b_out.data());
  return views;
}

}  // namespace

Model init_model(std::uint64_t seed, std::uint32_t in_dim, std::uint32_t hidden,
                 std::uint32_t num_classes, std::uint32_t depth) {
  if (depth < 1) throw std::invalid_argument("init_model: depth must be >= 1");
  std::mt19937_64 rng(seed);
  auto glorot = [&](std::uint32_t rows, std::uint32_t cols) {
    const double limit = std::sqrt(6.0 / (rows + cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    RowMat m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
  };

  Model model;
  model.layers.resize(depth);
  std::uint32_t in = in_dim;
  for (std::uint32_t l = 0; l < depth; ++l) {
    model.layers[l].w_self = glorot(in, hidden);
    model.layers[l].w_neigh = glorot(in, hidden);
    model.layers[l].bias = RowVec::Zero(hidden);
    in = hidden;
  }
  model.w_out = glorot(in, num_classes);
  model.b_out = RowVec::Zero(num_classes);
  return model;
}

SageContext make_context(const EdaGraph& g) {
  SageContext ctx;
  ctx.labels = g.labels;
  ctx.features.resize(g.n, 4);
  for (std::uint32_t v = 0; v < g.n; ++v)
    for (int c = 0; c < 4; ++c) ctx.features(v, c) = g.features[4 * v + c];

  // D^-1 A: the CSR copy of the adjacency with rows scaled by 1/degree.
  ctx.a_mean.rows = ctx.a_mean.cols = g.n;
  ctx.a_mean.row_ptr = g.row_ptr;
  ctx.a_mean.col_idx = g.col_idx;
  ctx.a_mean.values.resize(g.col_idx.size());
  for (std::uint32_t v = 0; v < g.n; ++v) {
    const double inv = g.degree[v] > 0 ? 1.0 / g.degree[v] : 0.0;
    for (std::uint64_t e = g.row_ptr[v]; e < g.row_ptr[v + 1]; ++e) ctx.a_mean.values[e] = inv;
  }
  // (D^-1 A)^T = A D^-1: same pattern (A symmetric), columns scaled instead.
  ctx.a_mean_t.rows = ctx.a_mean_t.cols = g.n;
  ctx.a_mean_t.row_ptr = g.row_ptr;
  ctx.a_mean_t.col_idx = g.col_idx;
  ctx.a_mean_t.values.resize(g.col_idx.size());
  for (std::uint32_t v = 0; v < g.n; ++v)
    for (std::uint64_t e = g.row_ptr[v]; e < g.row_ptr[v + 1]; ++e) {
      const std::uint32_t u = g.col_idx[e];
      ctx.a_mean_t.values[e] = g.degree[u] > 0 ? 1.0 / g.degree[u] : 0.0;
    }

  ctx.plan = spmm::build_plan(ctx.a_mean, 0);
  ctx.plan_t = spmm::build_plan(ctx.a_mean_t, 0);
  return ctx;
}

RowMat forward(const Model& model, const SageContext& ctx) {
  ForwardCache cache;
  run_forward(model, ctx, cache);
  return std::move(cache.logits);
}

RowMat forward(const Model& model, const EdaGraph& g) { return forward(model, make_context(g)); }

double loss_and_grads(const Model& model, const SageContext& ctx, Grads* grads) {
  ForwardCache cache;
  run_forward(model, ctx, cache);
  RowMat prob;
  const double loss = softmax_loss(cache.logits, ctx.labels, grads ? &prob : nullptr);
  if (!grads) return loss;

  *grads = zero_grads_like(model);
  const Eigen::Index n = cache.logits.rows();
  RowMat dlogits = prob;
  for (Eigen::Index i = 0; i < n; ++i) dlogits(i, ctx.labels[i]) -= 1.0;
  dlogits /= static_cast<double>(n);

  const std::size_t depth = model.layers.size();
  grads->w_out = cache.h[depth].transpose() * dlogits;
  grads->b_out = dlogits.colwise().sum();
  RowMat dh = dlogits * model.w_out.transpose();

  for (std::size_t l = depth; l-- > 0;) {
    const RowMat dz = (cache.z[l].array() > 0.0).select(dh, 0.0);
    grads->layers[l].w_self = cache.h[l].transpose() * dz;
    grads->layers[l].w_neigh = cache.m[l].transpose() * dz;
    grads->layers[l].bias = dz.colwise().sum();
    if (l > 0) {
      dh = dz * model.layers[l].w_self.transpose();
      dh += spmm_apply(ctx.a_mean_t, ctx.plan_t, dz * model.layers[l].w_neigh.transpose());
    }
  }
  return loss;
}

Model train(const EdaGraph& g, const TrainConfig& cfg, TrainStats* stats) {
  if (cfg.learning_rate <= 0) throw std::invalid_argument("train: learning rate must be positive");
  const SageContext ctx = make_context(g);
  Model model = init_model(cfg.seed);

  std::vector<std::size_t> sizes;
  std::vector<double*> params = param_views(model, &sizes);
  std::vector<std::vector<double>> m1(params.size()), m2(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    m1[i].assign(sizes[i], 0.0);
    m2[i].assign(sizes[i], 0.0);
  }

  Grads grads;
  for (std::uint32_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double loss = loss_and_grads(model, ctx, &grads);
    if (!std::isfinite(loss)) throw std::runtime_error("train: loss diverged (non-finite)");
    if (stats) {
      stats->loss.push_back(loss);
      ForwardCache cache;
      run_forward(model, ctx, cache);
      std::uint64_t hit = 0;
      for (Eigen::Index i = 0; i < cache.logits.rows(); ++i) {
        Eigen::Index arg;
        cache.logits.row(i).maxCoeff(&arg);
        hit += arg == ctx.labels[i];
      }
      stats->accuracy.push_back(static_cast<double>(hit) / static_cast<double>(g.n));
    }

    std::vector<double*> gv = grad_views(grads);
    const double bc1 = 1.0 - std::pow(cfg.beta1, epoch);
    const double bc2 = 1.0 - std::pow(cfg.beta2, epoch);
    for (std::size_t i = 0; i < params.size(); ++i) {
      for (std::size_t j = 0; j < sizes[i]; ++j) {
        const double grad = gv[i][j];
        m1[i][j] = cfg.beta1 * m1[i][j] + (1.0 - cfg.beta1) * grad;
        m2[i][j] = cfg.beta2 * m2[i][j] + (1.0 - cfg.beta2) * grad * grad;
        params[i][j] -=
            cfg.learning_rate * (m1[i][j] / bc1) / (std::sqrt(m2[i][j] / bc2) + cfg.adam_eps);
      }
    }
  }
  return model;
}

namespace {

void score_rows(const RowMat& logits, const AugmentedPartition* part, Prediction& pred) {
  const Eigen::Index rows = part ? part->num_core() : logits.rows();
  for (Eigen::Index i = 0; i < rows; ++i) {
    Eigen::Index arg;
    logits.row(i).maxCoeff(&arg);
    const std::uint32_t global = part ? part->core_nodes[i] : static_cast<std::uint32_t>(i);
    pred.labels[global] = static_cast<std::uint8_t>(arg);
  }
}

void finish_prediction(const EdaGraph& g, Prediction& pred) {
  std::uint64_t hit = 0;
  for (std::uint32_t v = 0; v < g.n; ++v) {
    ++pred.confusion[g.labels[v]][pred.labels[v]];
    hit += g.labels[v] == pred.labels[v];
  }
  pred.accuracy = g.n == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(g.n);
}

}  // namespace

Prediction predict(const Model& model, const EdaGraph& g,
                   const std::vector<AugmentedPartition>& parts) {
  Prediction pred;
  pred.labels.assign(g.n, 0);
  std::vector<RowMat> logits(parts.size());
  default_pool().for_each(parts.size(), [&](std::size_t p) {
    logits[p] = forward(model, materialize(g, parts[p]));
  });
  for (std::size_t p = 0; p < parts.size(); ++p) score_rows(logits[p], &parts[p], pred);
  finish_prediction(g, pred);
  return pred;
}

Prediction predict_full(const Model& model, const EdaGraph& g) {
  Prediction pred;
  pred.labels.assign(g.n, 0);
  const RowMat logits = forward(model, g);
  score_rows(logits, nullptr, pred);
  finish_prediction(g, pred);
  return pred;
}

double grad_check(const Model& model, const EdaGraph& g, double epsilon) {
  const SageContext ctx = make_context(g);
  Grads analytic;
  loss_and_grads(model, ctx, &analytic);

  Model probe = model;
  std::vector<std::size_t> sizes;
  std::vector<double*> params = param_views(probe, &sizes);
  std::vector<double*> gv = grad_views(analytic);

  double max_err = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t j = 0; j < sizes[i]; ++j) {
      const double saved = params[i][j];
      params[i][j] = saved + epsilon;
      const double up = loss_and_grads(probe, ctx, nullptr);
      params[i][j] = saved - epsilon;
      const double down = loss_and_grads(probe, ctx, nullptr);
      params[i][j] = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = gv[i][j];
      const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1.0});
      max_err = std::max(max_err, err);
    }
  }
  return max_err;
}

void save_model(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  const char magic[4] = {'A', 'S', 'G', '1'};
  out.write(magic, 4);
  auto put32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  put32(static_cast<std::uint32_t>(model.layers.size()));
  put32(model.in_dim());
  put32(static_cast<std::uint32_t>(model.layers.front().w_self.cols()));
  put32(model.num_classes());
  Model copy = model;
  std::vector<std::size_t> sizes;
  std::vector<double*> params = param_views(copy, &sizes);
  for (std::size_t i = 0; i < params.size(); ++i)
    out.write(reinterpret_cast<const char*>(params[i]), sizes[i] * sizeof(double));
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "ASG1")
    throw std::runtime_error("model file: bad magic or version");
  auto get32 = [&]() {
    std::uint32_t v;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  const std::uint32_t depth = get32();
  const std::uint32_t in_dim = get32();
  const std::uint32_t hidden = get32();
  const std::uint32_t classes = get32();
  if (!in || depth == 0 || depth > 64) throw std::runtime_error("model file: bad header");

  Model model = init_model(0, in_dim, hidden, classes, depth);
  std::vector<std::size_t> sizes;
  std::vector<double*> params = param_views(model, &sizes);
  for (std::size_t i = 0; i < params.size(); ++i)
    in.read(reinterpret_cast<char*>(params[i]), sizes[i] * sizeof(double));
  if (!in) throw std::runtime_error("model file: truncated");
  return model;
}

}  // namespace aigsage
