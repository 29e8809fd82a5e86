// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "aigsage/encode.hpp"
#include "aigsage/partition.hpp"
#include "aigsage/spmm.hpp"

namespace aigsage {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVec = Eigen::RowVectorXd;

/// h' = act(h * w_self + mean_{u in N(v)} h_u * w_neigh + bias).
struct SageLayer {
  RowMat w_self;
  RowMat w_neigh;
  RowVec bias;
};

struct Model {
  std::vector<SageLayer> layers;  // 4 -> 32 -> 32 -> 32 -> 32
  RowMat w_out;                   // final linear 32 -> 5
  RowVec b_out;

  std::uint32_t in_dim() const { return static_cast<std::uint32_t>(layers.front().w_self.rows()); }
  std::uint32_t num_classes() const { return static_cast<std::uint32_t>(w_out.cols()); }
};

Model init_model(std::uint64_t seed, std::uint32_t in_dim = 4, std::uint32_t hidden = 32,
                 std::uint32_t num_classes = kNumClasses, std::uint32_t depth = 4);

struct TrainConfig {
  std::uint32_t epochs = 100;
  double learning_rate = 1e-3;
  std::uint64_t seed = 7;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct TrainStats {
  std::vector<double> loss;      // per epoch
  std::vector<double> accuracy;  // training accuracy per epoch
};

/// Precomputed mean-aggregation operators for one graph: D^-1 A and its
/// transpose A D^-1, with their execution plans. Rows without neighbors
/// aggregate to zero.
struct SageContext {
  spmm::CsrMatrix<double> a_mean;
  spmm::CsrMatrix<double> a_mean_t;
  spmm::SpmmPlan plan;
  spmm::SpmmPlan plan_t;
  RowMat features;
  std::vector<std::uint8_t> labels;
};

SageContext make_context(const EdaGraph& g);

/// n x num_classes logits. Deterministic for a fixed graph and model.
RowMat forward(const Model& model, const SageContext& ctx);
RowMat forward(const Model& model, const EdaGraph& g);

/// Full-batch training with adaptive-moment estimation; the model is
/// initialized from cfg.seed, so epochs == 0 returns the initial weights.
/// Throws on non-finite loss.
Model train(const EdaGraph& g, const TrainConfig& cfg, TrainStats* stats = nullptr);

struct Prediction {
  std::vector<std::uint8_t> labels;  // one per global node
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> confusion{};  // [truth][pred]
  double accuracy = 0.0;
};

/// Each node is scored from the partition that owns it as a core node;
/// boundary copies carry features into aggregation but are never scored.
Prediction predict(const Model& model, const EdaGraph& g,
                   const std::vector<AugmentedPartition>& parts);
Prediction predict_full(const Model& model, const EdaGraph& g);

/// Max relative deviation between analytic and central-difference gradients
/// over every parameter, with |a - n| / max(|a|, |n|, 1).
double grad_check(const Model& model, const EdaGraph& g, double epsilon = 1e-4);

void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

// Parameter gradients, shaped like the model. Exposed for tests.
struct Grads {
  std::vector<SageLayer> layers;
  RowMat w_out;
  RowVec b_out;
};
double loss_and_grads(const Model& model, const SageContext& ctx, Grads* grads);

}  // namespace aigsage
