// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "nhtd/errors.hpp"
#include "nhtd/rng_util.hpp"

namespace nhtd {

using ad::Mat;
using ad::Tape;
using ad::VarId;

const char* layer_kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::Gat: return "gat";
    case LayerKind::Mpnn: return "mpnn";
    case LayerKind::Gin: return "gin";
  }
  return "gat";
}

LayerKind layer_kind_from_name(const std::string& s) {
  if (s == "gat") return LayerKind::Gat;
  if (s == "mpnn") return LayerKind::Mpnn;
  if (s == "gin") return LayerKind::Gin;
  fail(Errc::bad_config, "unknown model '" + s + "'");
}

void validate_config(const ModelConfig& c) {
  if (c.lr <= 0.0) fail(Errc::bad_config, "learning rate must be positive");
  if (c.num_layers < 1) fail(Errc::bad_config, "num_layers must be >= 1");
  if (c.hidden_units < 1) fail(Errc::bad_config, "hidden_units must be >= 1");
  if (c.num_batches < 1) fail(Errc::invalid_m, "num_batches must be >= 1");
  if (c.max_epochs < 0 || c.patience < 0) fail(Errc::bad_config, "negative epoch bound");
}

const Mat& TrainedModel::tensor(const std::string& name) const {
  for (const NamedTensor& w : weights)
    if (w.name == name) return w.value;
  fail(Errc::shape_mismatch, "no tensor named '" + name + "'");
}

namespace {

// Aggregation entries at each destination node. The attribute consumed for
// an entry is the one of the incoming directed edge u->dst, i.e. the flip
// of the attribute stored on dst's adjacency slot (which encodes dst->u).
// dir: 0 = (1,0) forward, 1 = (0,1) backward, 2 = zero (self slot).
struct Agg {
  std::vector<int> dst, src, dir;
};

Agg aggregation_entries(const Eaug& g) {
  Agg a;
  for (int v = 0; v < g.node_count; ++v) {
    for (const AdjEntry& e : g.adjacency[v]) {
      a.dst.push_back(v);
      a.src.push_back(e.neighbor);
      a.dir.push_back(e.forward ? 1 : 0);
    }
  }
  return a;
}

Agg attention_entries(const Eaug& g) {
  Agg a;
  for (int v = 0; v < g.node_count; ++v) {
    a.dst.push_back(v);  // self slot first
    a.src.push_back(v);
    a.dir.push_back(2);
    for (const AdjEntry& e : g.adjacency[v]) {
      a.dst.push_back(v);
      a.src.push_back(e.neighbor);
      a.dir.push_back(e.forward ? 1 : 0);
    }
  }
  return a;
}

Mat dir_matrix(const std::vector<int>& dir) {
  Mat m(static_cast<int>(dir.size()), 2);
  for (size_t i = 0; i < dir.size(); ++i) {
    if (dir[i] == 0) m.at(static_cast<int>(i), 0) = 1.0;
    if (dir[i] == 1) m.at(static_cast<int>(i), 1) = 1.0;
  }
  return m;
}

struct LayerVars {
  std::vector<VarId> w;  // per-layer weights in schema order
};

// Weight counts per layer by kind: GAT {W, att_w, att_b}; MPNN {W, mlp_w1,
// mlp_b1, mlp_w2, mlp_b2}; GIN {edge_w, eps, mlp_w1, mlp_b1, mlp_w2, mlp_b2}.
int weights_per_layer(LayerKind k) {
  switch (k) {
    case LayerKind::Gat: return 3;
    case LayerKind::Mpnn: return 5;
    case LayerKind::Gin: return 6;
  }
  return 0;
}

VarId build_gat_layer(Tape& t, const Eaug& g, VarId h, int din, const LayerVars& lv,
                      VarId* alpha_out) {
  Agg a = attention_entries(g);
  VarId W = lv.w[0], att_w = lv.w[1], att_b = lv.w[2];
  VarId Wh = t.slice_cols(W, 0, din);
  VarId Wd = t.slice_cols(W, din, 2);
  VarId P = t.matmul(h, Wh, false, true);  // n x units
  VarId Pv = t.gather_rows(P, a.dst);
  VarId Pu = t.gather_rows(P, a.src);
  VarId att_in = t.concat_cols(Pv, Pu);
  VarId logits = t.add_rowvec(t.matmul(att_in, att_w, false, true), att_b);
  VarId e = t.leaky_relu(logits, 0.2);
  VarId alpha = t.segment_softmax(e, a.dst, g.node_count);
  if (alpha_out) *alpha_out = alpha;
  VarId evec = t.matmul(t.input(dir_matrix(a.dir), false), Wd, false, true);
#ifdef NHTD_GAT_LITERAL_NEIGHBOR_TERM
  // the printed equation's form: the destination state inside the sum
  VarId msg = t.add(Pv, evec);
#else
  VarId msg = t.add(Pu, evec);
#endif
  VarId weighted = t.mul_colbroadcast(alpha, msg);
  return t.segment_sum(weighted, a.dst, g.node_count);
}

VarId build_mpnn_layer(Tape& t, const Eaug& g, VarId h, int din, int units,
                       const LayerVars& lv) {
  Agg a = aggregation_entries(g);
  VarId W = lv.w[0], w1 = lv.w[1], b1 = lv.w[2], w2 = lv.w[3], b2 = lv.w[4];
  // the two possible edge attributes, transformed once per pass
  Mat eattr(2, 2);
  eattr.at(0, 0) = 1.0;  // row 0: forward (1,0)
  eattr.at(1, 1) = 1.0;  // row 1: backward (0,1)
  VarId hidden = t.elu(t.add_rowvec(t.matmul(t.input(eattr, false), w1, false, true), b1));
  VarId theta = t.add_rowvec(t.matmul(hidden, w2, false, true), b2);  // 2 x (din*units)
  std::vector<int> fwd_rows, bwd_rows;
  std::vector<int> fwd_src, bwd_src, fwd_dst, bwd_dst;
  for (size_t i = 0; i < a.dir.size(); ++i) {
    if (a.dir[i] == 0) {
      fwd_src.push_back(a.src[i]);
      fwd_dst.push_back(a.dst[i]);
    } else {
      bwd_src.push_back(a.src[i]);
      bwd_dst.push_back(a.dst[i]);
    }
  }
  VarId self = t.matmul(h, W, false, true);  // n x units
  VarId total = self;
  auto add_direction = [&](const std::vector<int>& src, const std::vector<int>& dst, int row) {
    if (src.empty()) return;
    VarId tr = t.reshape(t.gather_rows(theta, {row}), din, units);
    VarId mh = t.matmul(t.gather_rows(h, src), tr);  // e x units
    total = t.add(total, t.segment_sum(mh, dst, g.node_count));
  };
  add_direction(fwd_src, fwd_dst, 0);
  add_direction(bwd_src, bwd_dst, 1);
  return total;
}

VarId build_gin_layer(Tape& t, const Eaug& g, VarId h, const LayerVars& lv) {
  Agg a = aggregation_entries(g);
  VarId edge_w = lv.w[0], eps = lv.w[1], w1 = lv.w[2], b1 = lv.w[3], w2 = lv.w[4], b2 = lv.w[5];
  VarId pre;
  if (!a.src.empty()) {
    VarId evec = t.matmul(t.input(dir_matrix(a.dir), false), edge_w, false, true);  // e x din
    VarId msg = t.relu(t.add(t.gather_rows(h, a.src), evec));
    VarId agg = t.segment_sum(msg, a.dst, g.node_count);
    pre = t.add(t.scale_by_scalar(h, eps, 1.0), agg);
  } else {
    pre = t.scale_by_scalar(h, eps, 1.0);
  }
  VarId hidden = t.elu(t.add_rowvec(t.matmul(pre, w1, false, true), b1));
  return t.add_rowvec(t.matmul(hidden, w2, false, true), b2);
}

struct ForwardPass {
  Tape tape;
  std::vector<VarId> weight_vars;
  VarId z = -1;  // final embeddings (head input)
  VarId probs = -1;
  VarId loss = -1;
  std::vector<VarId> alpha_vars;
};

// Builds the whole model on a tape. `targets`/`loss_rows` may be empty for
// inference-only passes.
void build_model(ForwardPass& fp, const TrainedModel& model, const Eaug& g, const Mat& h0,
                 bool with_grad, const std::vector<int>& loss_rows, const Mat& targets) {
  Tape& t = fp.tape;
  const ModelConfig& c = model.config;
  for (const NamedTensor& w : model.weights)
    fp.weight_vars.push_back(t.input(w.value, with_grad));

  const int per_layer = weights_per_layer(c.layer_kind);
  VarId h = t.input(h0, false);
  int din = model.input_dim;
  for (int l = 0; l < c.num_layers; ++l) {
    LayerVars lv;
    for (int k = 0; k < per_layer; ++k) lv.w.push_back(fp.weight_vars[l * per_layer + k]);
    VarId next = -1;
    VarId alpha = -1;
    switch (c.layer_kind) {
      case LayerKind::Gat:
        next = build_gat_layer(t, g, h, din, lv, &alpha);
        fp.alpha_vars.push_back(alpha);
        break;
      case LayerKind::Mpnn:
        next = build_mpnn_layer(t, g, h, din, c.hidden_units, lv);
        break;
      case LayerKind::Gin:
        next = build_gin_layer(t, g, h, lv);
        break;
    }
    // ELU after every encoder layer except the last
    h = (l + 1 < c.num_layers) ? t.elu(next) : next;
    din = c.hidden_units;
  }
  fp.z = h;
  VarId pred_w = fp.weight_vars[c.num_layers * per_layer];
  VarId pred_b = fp.weight_vars[c.num_layers * per_layer + 1];
  VarId logits = t.add_rowvec(t.matmul(h, pred_w, false, true), pred_b);
  fp.probs = t.row_softmax(logits);
  if (!loss_rows.empty()) {
    VarId sel = t.gather_rows(fp.probs, loss_rows);
    fp.loss = t.bce_mean(sel, targets);
  }
}

Mat h0_from_features(const FeatureMatrix& fm) {
  Mat h(fm.rows, fm.cols);
  h.a = fm.data;
  return h;
}

}  // namespace

TrainedModel init_model(const ModelConfig& config, int input_dim) {
  validate_config(config);
  TrainedModel m;
  m.config = config;
  m.input_dim = input_dim;
  std::uint64_t stream = 0;
  auto gauss = [&](const std::string& name, int r, int cols) {
    m.weights.push_back({name, ad::gaussian_init(r, cols, cols, mix_seed(config.seed, ++stream))});
  };
  auto zeros = [&](const std::string& name, int r, int cols) {
    m.weights.push_back({name, Mat(r, cols)});
  };
  const int u = config.hidden_units;
  int din = input_dim;
  for (int l = 0; l < config.num_layers; ++l) {
    std::string p = "enc" + std::to_string(l) + ".";
    switch (config.layer_kind) {
      case LayerKind::Gat:
        gauss(p + "W", u, din + 2);
        gauss(p + "att_w", 1, 2 * u);
        zeros(p + "att_b", 1, 1);
        break;
      case LayerKind::Mpnn:
        gauss(p + "W", u, din);
        gauss(p + "mlp_w1", u, 2);
        zeros(p + "mlp_b1", 1, u);
        gauss(p + "mlp_w2", din * u, u);
        zeros(p + "mlp_b2", 1, din * u);
        break;
      case LayerKind::Gin:
        gauss(p + "edge_w", din, 2);
        zeros(p + "eps", 1, 1);
        gauss(p + "mlp_w1", u, din);
        zeros(p + "mlp_b1", 1, u);
        gauss(p + "mlp_w2", u, u);
        zeros(p + "mlp_b2", 1, u);
        break;
    }
    din = u;
  }
  gauss("pred.W", 2, u);
  zeros("pred.b", 1, 2);
  return m;
}

ad::Mat gat_layer(const Eaug& g, const Mat& h, const GatParams& p, std::vector<double>* alphas,
                  std::vector<int>* alpha_segments) {
  Tape t;
  VarId hv = t.input(h, false);
  LayerVars lv;
  lv.w = {t.input(p.W, false), t.input(p.att_w, false), t.input(p.att_b, false)};
  VarId alpha = -1;
  VarId out = build_gat_layer(t, g, hv, h.cols, lv, &alpha);
  if (alphas) {
    alphas->assign(t.value(alpha).a.begin(), t.value(alpha).a.end());
    if (alpha_segments) *alpha_segments = attention_entries(g).dst;
  }
  return t.value(out);
}

ad::Mat mpnn_layer(const Eaug& g, const Mat& h, const MpnnParams& p) {
  Tape t;
  VarId hv = t.input(h, false);
  LayerVars lv;
  lv.w = {t.input(p.W, false), t.input(p.mlp_w1, false), t.input(p.mlp_b1, false),
          t.input(p.mlp_w2, false), t.input(p.mlp_b2, false)};
  return t.value(build_mpnn_layer(t, g, hv, h.cols, p.W.rows, lv));
}

ad::Mat gin_layer(const Eaug& g, const Mat& h, const GinParams& p) {
  Tape t;
  VarId hv = t.input(h, false);
  LayerVars lv;
  lv.w = {t.input(p.edge_w, false), t.input(p.eps, false), t.input(p.mlp_w1, false),
          t.input(p.mlp_b1, false), t.input(p.mlp_w2, false), t.input(p.mlp_b2, false)};
  return t.value(build_gin_layer(t, g, hv, lv));
}

ad::Mat predict_head(const Mat& z, const Mat& W, const Mat& b) {
  Tape t;
  VarId logits = t.add_rowvec(t.matmul(t.input(z, false), t.input(W, false), false, true),
                              t.input(b, false));
  return t.value(t.row_softmax(logits));
}

double bce_loss(const Mat& probs, const std::vector<std::array<double, 2>>& targets) {
  if (probs.cols != 2 || probs.rows != static_cast<int>(targets.size()))
    fail(Errc::shape_mismatch, "bce_loss expects (n x 2) probs with n targets");
  double sum = 0.0;
  for (int i = 0; i < probs.rows; ++i)
    for (int j = 0; j < 2; ++j) {
      double tv = targets[i][j];
      if (tv == 0.0) continue;
      double pv = std::clamp(probs.at(i, j), 1e-12, 1.0 - 1e-12);
      sum -= tv * std::log(pv);
    }
  return probs.rows > 0 ? sum / probs.rows : 0.0;
}

ad::Mat encode(const TrainedModel& model, const Eaug& g, const FeatureMatrix& fm,
               std::vector<std::vector<double>>* alphas) {
  if (fm.cols != model.input_dim)
    fail(Errc::mode_mismatch, "feature width " + std::to_string(fm.cols) + " vs model input " +
                                  std::to_string(model.input_dim));
  ForwardPass fp;
  build_model(fp, model, g, h0_from_features(fm), false, {}, Mat());
  if (alphas) {
    alphas->clear();
    for (VarId a : fp.alpha_vars)
      alphas->emplace_back(fp.tape.value(a).a.begin(), fp.tape.value(a).a.end());
  }
  return fp.tape.value(fp.z);
}

BatchPass backward(const TrainedModel& model, const MiniBatch& batch) {
  if (batch.features.cols != model.input_dim)
    fail(Errc::mode_mismatch, "feature width vs model input dim");
  Mat targets(static_cast<int>(batch.loss_rows.size()), 2);
  for (size_t i = 0; i < batch.loss_rows.size(); ++i) {
    targets.at(static_cast<int>(i), 0) = batch.targets[batch.loss_rows[i]][0];
    targets.at(static_cast<int>(i), 1) = batch.targets[batch.loss_rows[i]][1];
  }
  ForwardPass fp;
  build_model(fp, model, batch.graph, h0_from_features(batch.features), true, batch.loss_rows,
              targets);
  fp.tape.backward(fp.loss);
  BatchPass bp;
  bp.loss = fp.tape.value(fp.loss).at(0, 0);
  if (!std::isfinite(bp.loss)) fail(Errc::nan_gradient, "non-finite loss");
  bp.grads.tensors.reserve(model.weights.size());
  for (size_t i = 0; i < model.weights.size(); ++i) {
    Mat g = fp.tape.grad(fp.weight_vars[i]);
    if (!g.finite()) fail(Errc::nan_gradient, "non-finite gradient on " + model.weights[i].name);
    bp.grads.tensors.push_back({model.weights[i].name, std::move(g)});
  }
  return bp;
}

void adam_step(std::vector<NamedTensor>& weights, const Gradients& grads, AdamState& state,
               double lr) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if (state.m.empty()) {
    for (const NamedTensor& w : weights) {
      state.m.emplace_back(w.value.rows, w.value.cols);
      state.v.emplace_back(w.value.rows, w.value.cols);
    }
  }
  if (grads.tensors.size() != weights.size()) fail(Errc::shape_mismatch, "gradient count");
  state.t += 1;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
  for (size_t i = 0; i < weights.size(); ++i) {
    Mat& w = weights[i].value;
    const Mat& g = grads.tensors[i].value;
    for (size_t k = 0; k < w.a.size(); ++k) {
      double gk = g.a[k];
      state.m[i].a[k] = b1 * state.m[i].a[k] + (1.0 - b1) * gk;
      state.v[i].a[k] = b2 * state.v[i].a[k] + (1.0 - b2) * gk * gk;
      double mhat = state.m[i].a[k] / c1;
      double vhat = state.v[i].a[k] / c2;
      w.a[k] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

bool EarlyStopping::note_epoch(double loss) {
  ++epoch_;
  if (!has_best_ || loss < best_) {
    has_best_ = true;
    best_ = loss;
    best_epoch_ = epoch_;
    stale_ = 0;
    return false;
  }
  ++stale_;
  return stale_ >= patience_;
}

TrainResult train(const std::vector<TrainGraph>& dataset, const ModelConfig& config,
                  std::vector<ColumnStats> feature_stats) {
  validate_config(config);
  if (dataset.empty()) fail(Errc::empty_dataset, "no training graphs");
  const int input_dim = feature_dim(config.feature_mode);
  for (const TrainGraph& tg : dataset) {
    if (tg.features.mode != config.feature_mode)
      fail(Errc::mode_mismatch, "graph '" + tg.name + "' featurized in a different mode");
    if (tg.features.rows != tg.graph.node_count)
      fail(Errc::shape_mismatch, "features of '" + tg.name + "' do not cover the graph");
  }

  TrainResult res;
  res.model = init_model(config, input_dim);
  res.model.feature_stats = std::move(feature_stats);

  std::vector<NamedTensor> best = res.model.weights;
  AdamState adam;
  EarlyStopping stop(config.patience);
  std::mt19937_64 sampler_rng(mix_seed(config.seed, 0x53414d50ULL));  // sampling stream

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    double loss_sum = 0.0;
    long batches = 0;
    for (const TrainGraph& tg : dataset) {
      std::vector<MiniBatch> mbs =
          make_batches(tg.graph, tg.features, config.num_batches, sampler_rng,
                       config.batch_context);
      for (const MiniBatch& mb : mbs) {
        if (mb.loss_rows.empty()) continue;
        BatchPass bp = backward(res.model, mb);
        adam_step(res.model.weights, bp.grads, adam, config.lr);
        loss_sum += bp.loss;
        ++batches;
      }
    }
    if (batches == 0) fail(Errc::empty_dataset, "no non-empty batches");
    double epoch_loss = loss_sum / static_cast<double>(batches);
    res.loss_trace.push_back(epoch_loss);
    res.epochs_run = epoch + 1;
    bool should_stop = stop.note_epoch(epoch_loss);
    if (stop.best_epoch() == epoch + 1) best = res.model.weights;
    if (should_stop) break;
  }
  res.best_epoch = stop.best_epoch();
  res.model.weights = std::move(best);
  return res;
}

Detection detect(const TrainedModel& model, const Eaug& g, const FeatureMatrix& fm) {
  if (fm.mode != model.config.feature_mode)
    fail(Errc::mode_mismatch, "feature mode does not match the model");
  if (fm.rows != g.node_count) fail(Errc::shape_mismatch, "features do not cover the graph");
  ForwardPass fp;
  build_model(fp, model, g, h0_from_features(fm), false, {}, Mat());
  const Mat& probs = fp.tape.value(fp.probs);
  Detection d;
  d.labels.resize(g.node_count);
  d.p_trojan.resize(g.node_count);
  for (int v = 0; v < g.node_count; ++v) {
    double pt = probs.at(v, 1);
    d.p_trojan[v] = pt;
    d.labels[v] = pt >= probs.at(v, 0) ? NodeLabel::Trojan : NodeLabel::Normal;
  }
  return d;
}

Detection detect_netlist(const TrainedModel& model, const Netlist& nl, const CellLibrary& lib) {
  Eaug g = build_eaug(nl, lib);
  FeatureMatrix fm = compute_features(nl, lib, g, model.config.feature_mode);
  fm.stats = model.feature_stats;
  fm = standardize(fm, false);
  return detect(model, g, fm);
}

// ---------------------------------------------------------------------------
// Checkpoint

namespace {

nlohmann::json config_to_json(const ModelConfig& c) {
  return {
      {"layer_kind", layer_kind_name(c.layer_kind)},
      {"num_layers", c.num_layers},
      {"hidden_units", c.hidden_units},
      {"feature_mode", feature_mode_name(c.feature_mode)},
      {"num_batches", c.num_batches},
      {"lr", c.lr},
      {"max_epochs", c.max_epochs},
      {"patience", c.patience},
      {"seed", c.seed},
      {"batch_context", c.batch_context == BatchContext::Induced ? "induced" : "full"},
  };
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.layer_kind = layer_kind_from_name(j.at("layer_kind").get<std::string>());
  c.num_layers = j.at("num_layers").get<int>();
  c.hidden_units = j.at("hidden_units").get<int>();
  c.feature_mode = feature_mode_from_name(j.at("feature_mode").get<std::string>());
  c.num_batches = j.at("num_batches").get<int>();
  c.lr = j.at("lr").get<double>();
  c.max_epochs = j.at("max_epochs").get<int>();
  c.patience = j.at("patience").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  std::string bc = j.at("batch_context").get<std::string>();
  if (bc != "induced" && bc != "full") fail(Errc::bad_config, "batch_context '" + bc + "'");
  c.batch_context = bc == "induced" ? BatchContext::Induced : BatchContext::Full;
  return c;
}

}  // namespace

std::string save_checkpoint(const TrainedModel& model) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["config"] = config_to_json(model.config);
  j["input_dim"] = model.input_dim;
  nlohmann::json stats = nlohmann::json::array();
  for (const ColumnStats& cs : model.feature_stats)
    stats.push_back({{"column", cs.column}, {"mean", cs.mean}, {"stddev", cs.stddev}});
  j["feature_stats"] = std::move(stats);
  nlohmann::json ws = nlohmann::json::array();
  for (const NamedTensor& w : model.weights) {
    ws.push_back({{"name", w.name},
                  {"shape", {w.value.rows, w.value.cols}},
                  {"values", w.value.a}});
  }
  j["weights"] = std::move(ws);
  return j.dump(2) + "\n";
}

TrainedModel load_checkpoint(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::schema_error, std::string("checkpoint: ") + e.what());
  }
  if (!j.contains("format_version") || j.at("format_version").get<int>() != 1)
    fail(Errc::schema_error, "checkpoint: unsupported format_version");
  TrainedModel m;
  m.config = config_from_json(j.at("config"));
  m.input_dim = j.at("input_dim").get<int>();
  for (const auto& s : j.at("feature_stats"))
    m.feature_stats.push_back({s.at("column").get<int>(), s.at("mean").get<double>(),
                               s.at("stddev").get<double>()});
  for (const auto& w : j.at("weights")) {
    NamedTensor nt;
    nt.name = w.at("name").get<std::string>();
    auto shape = w.at("shape");
    nt.value = Mat(shape.at(0).get<int>(), shape.at(1).get<int>());
    const auto& vals = w.at("values");
    if (vals.size() != nt.value.a.size())
      fail(Errc::schema_error, "checkpoint: tensor '" + nt.name + "' size mismatch");
    for (size_t i = 0; i < nt.value.a.size(); ++i) nt.value.a[i] = vals.at(i).get<double>();
    m.weights.push_back(std::move(nt));
  }
  return m;
}

}  // namespace nhtd
