// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_GNN_HPP
#define NHTD_GNN_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nhtd/autograd.hpp"
#include "nhtd/eaug.hpp"
#include "nhtd/features.hpp"
#include "nhtd/sampler.hpp"

namespace nhtd {

enum class LayerKind { Gat, Mpnn, Gin };

const char* layer_kind_name(LayerKind k);
LayerKind layer_kind_from_name(const std::string& s);

struct ModelConfig {
  LayerKind layer_kind = LayerKind::Gat;
  int num_layers = 3;
  int hidden_units = 16;
  FeatureMode feature_mode = FeatureMode::Netlist46;
  int num_batches = 20;
  double lr = 0.1;
  int max_epochs = 1000;
  int patience = 50;
  std::uint64_t seed = 1;
  BatchContext batch_context = BatchContext::Induced;
};

void validate_config(const ModelConfig& c);

struct NamedTensor {
  std::string name;
  ad::Mat value;
};

struct TrainedModel {
  ModelConfig config;
  int input_dim = 0;
  std::vector<ColumnStats> feature_stats;
  std::vector<NamedTensor> weights;  // canonical order: encoder layers, then head

  const ad::Mat& tensor(const std::string& name) const;
};

// Seeded Gaussian init (stddev 1/sqrt(fan_in)); biases and GIN eps start
// at zero.
TrainedModel init_model(const ModelConfig& config, int input_dim);

// ---------------------------------------------------------------------------
// Single-layer forward evaluation (values only). These mirror the encoder
// layers one at a time; the training path drives the same graph builders
// through the tape.

struct GatParams {
  const ad::Mat& W;      // units x (din + 2)
  const ad::Mat& att_w;  // 1 x (2*units)
  const ad::Mat& att_b;  // 1 x 1
};
// When `alphas` is given it receives one attention coefficient per entry of
// `alpha_segments` (same order): node v's self coefficient followed by one
// per adjacency entry.
ad::Mat gat_layer(const Eaug& g, const ad::Mat& h, const GatParams& p,
                  std::vector<double>* alphas = nullptr,
                  std::vector<int>* alpha_segments = nullptr);

struct MpnnParams {
  const ad::Mat& W;       // units x din
  const ad::Mat& mlp_w1;  // width x 2
  const ad::Mat& mlp_b1;  // 1 x width
  const ad::Mat& mlp_w2;  // (din*units) x width
  const ad::Mat& mlp_b2;  // 1 x (din*units)
};
ad::Mat mpnn_layer(const Eaug& g, const ad::Mat& h, const MpnnParams& p);

struct GinParams {
  const ad::Mat& edge_w;  // din x 2
  const ad::Mat& eps;     // 1 x 1
  const ad::Mat& mlp_w1;  // units x din
  const ad::Mat& mlp_b1;  // 1 x units
  const ad::Mat& mlp_w2;  // units x units
  const ad::Mat& mlp_b2;  // 1 x units
};
ad::Mat gin_layer(const Eaug& g, const ad::Mat& h, const GinParams& p);

// Affine map to 2 logits followed by softmax; rows sum to 1.
ad::Mat predict_head(const ad::Mat& z, const ad::Mat& W, const ad::Mat& b);

// Mean over rows of -sum_c target_c * log(clamp(pred_c)).
double bce_loss(const ad::Mat& probs, const std::vector<std::array<double, 2>>& targets);

// Full encoder on values; feature rows must match the model's input dim.
// `alphas` (GAT only) collects one vector of attention coefficients per
// layer.
ad::Mat encode(const TrainedModel& model, const Eaug& g, const FeatureMatrix& fm,
               std::vector<std::vector<double>>* alphas = nullptr);

// ---------------------------------------------------------------------------
// Training

struct Gradients {
  std::vector<NamedTensor> tensors;  // aligned with TrainedModel::weights
};

struct BatchPass {
  double loss = 0.0;
  Gradients grads;
};

// Forward + exact reverse-mode gradients of the mean batch loss. Throws
// NaNGradient when the pass produces non-finite values.
BatchPass backward(const TrainedModel& model, const MiniBatch& batch);

struct AdamState {
  std::vector<ad::Mat> m, v;
  long t = 0;
};

// Standard Adam with bias correction; beta1 0.9, beta2 0.999, eps 1e-8.
void adam_step(std::vector<NamedTensor>& weights, const Gradients& grads, AdamState& state,
               double lr);

// Early-stopping policy: stop once the best loss has not improved for
// `patience` epochs. note_epoch returns true when training should stop.
struct EarlyStopping {
  explicit EarlyStopping(int patience) : patience_(patience) {}
  bool note_epoch(double loss);
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_; }

 private:
  int patience_;
  double best_ = 0.0;
  bool has_best_ = false;
  int stale_ = 0;
  int epoch_ = 0;
  int best_epoch_ = -1;
};

struct TrainGraph {
  std::string name;
  Eaug graph;
  FeatureMatrix features;  // standardized with the shared training stats
};

struct TrainResult {
  TrainedModel model;  // weights from the best-loss epoch
  std::vector<double> loss_trace;
  int best_epoch = -1;
  int epochs_run = 0;
};

TrainResult train(const std::vector<TrainGraph>& dataset, const ModelConfig& config,
                  std::vector<ColumnStats> feature_stats);

// ---------------------------------------------------------------------------
// Inference

struct Detection {
  std::vector<NodeLabel> labels;
  std::vector<double> p_trojan;
};

// Whole-graph classification; fm must be standardized and of the model's
// feature mode (FeatureModeMismatch otherwise). Exact 0.5 ties resolve to
// Trojan.
Detection detect(const TrainedModel& model, const Eaug& g, const FeatureMatrix& fm);

// Featurize + standardize with the model's stats, then detect.
Detection detect_netlist(const TrainedModel& model, const Netlist& nl, const CellLibrary& lib);

// Versioned JSON checkpoint; save -> load -> save is byte-identical.
std::string save_checkpoint(const TrainedModel& model);
TrainedModel load_checkpoint(const std::string& text);

}  // namespace nhtd

#endif  // NHTD_GNN_HPP
