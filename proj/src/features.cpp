// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/features.hpp"

#include <cmath>
#include <deque>
#include <unordered_map>

#include "json.hpp"

#include "nhtd/errors.hpp"

namespace nhtd {

const char* feature_mode_name(FeatureMode m) {
  return m == FeatureMode::Netlist46 ? "netlist46" : "baseline40";
}

FeatureMode feature_mode_from_name(const std::string& s) {
  if (s == "netlist46") return FeatureMode::Netlist46;
  if (s == "baseline40") return FeatureMode::Baseline40;
  fail(Errc::bad_config, "unknown feature mode '" + s + "'");
}

Degrees degrees(const Eaug& g) {
  Degrees d;
  d.in.assign(g.node_count, 0);
  d.out.assign(g.node_count, 0);
  for (int v = 0; v < g.node_count; ++v)
    for (const AdjEntry& e : g.adjacency[v]) (e.forward ? d.out[v] : d.in[v])++;
  return d;
}

std::vector<int> min_dist_to_anchors(const Eaug& g, const std::vector<int>& anchors) {
  std::vector<int> dist(g.node_count, -1);
  std::deque<int> q;
  for (int a : anchors) {
    if (a < 0 || a >= g.node_count) fail(Errc::index_out_of_range, "anchor " + std::to_string(a));
    if (dist[a] != 0) {
      dist[a] = 0;
      q.push_back(a);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (const AdjEntry& e : g.adjacency[v]) {
      if (dist[e.neighbor] < 0) {
        dist[e.neighbor] = dist[v] + 1;
        q.push_back(e.neighbor);
      }
    }
  }
  return dist;
}

namespace {

double fold_xor(const std::vector<double>& ps) {
  double r = 0.0;  // probability that the parity so far is 1
  for (double p : ps) r = r * (1.0 - p) + (1.0 - r) * p;
  return r;
}

double gate_p1(GateKind kind, const std::vector<double>& in) {
  switch (kind) {
    case GateKind::And: {
      double p = 1.0;
      for (double x : in) p *= x;
      return p;
    }
    case GateKind::Nand: {
      double p = 1.0;
      for (double x : in) p *= x;
      return 1.0 - p;
    }
    case GateKind::Or: {
      double p = 1.0;
      for (double x : in) p *= (1.0 - x);
      return 1.0 - p;
    }
    case GateKind::Nor: {
      double p = 1.0;
      for (double x : in) p *= (1.0 - x);
      return p;
    }
    case GateKind::Xor:
      return fold_xor(in);
    case GateKind::Xnor:
      return 1.0 - fold_xor(in);
    case GateKind::Inv:
      return in.empty() ? 0.5 : 1.0 - in[0];
    case GateKind::Buf:
      return in.empty() ? 0.5 : in[0];
    case GateKind::Mux: {
      // input order (S, A, B): out = S ? B : A
      double s = in.size() > 0 ? in[0] : 0.5;
      double a = in.size() > 1 ? in[1] : 0.5;
      double b = in.size() > 2 ? in[2] : 0.5;
      return s * b + (1.0 - s) * a;
    }
    case GateKind::Dff:
    case GateKind::Latch:
      return in.empty() ? 0.5 : in[0];  // data pin first
    case GateKind::Pi:
      return 0.5;
    case GateKind::Po:
      return in.empty() ? 0.5 : in[0];
    case GateKind::Other:
      return 0.5;
  }
  return 0.5;
}

}  // namespace

ProbAssignment static_probabilities(const Netlist& nl, const CellLibrary& lib) {
  const int n = nl.node_count();
  std::vector<Wire> wires = build_wires(nl);
  std::unordered_map<std::string, int> wire_index;
  for (int i = 0; i < static_cast<int>(wires.size()); ++i) wire_index[wires[i].name] = i;

  // Evaluation order: Kahn over the cell dependency graph; cells stuck in
  // cycles (sequential feedback, rings) are appended in netlist order and
  // settled by iteration.
  std::vector<std::vector<int>> consumers(n);
  std::vector<int> pending(n, 0);
  for (const Wire& w : wires) {
    if (w.driver < 0) continue;
    for (const auto& [sink, pin] : w.sinks) {
      consumers[w.driver].push_back(sink);
      ++pending[sink];
    }
  }
  std::vector<int> order;
  order.reserve(n);
  std::deque<int> ready;
  for (int i = 0; i < n; ++i)
    if (pending[i] == 0) ready.push_back(i);
  std::vector<bool> placed(n, false);
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop_front();
    placed[v] = true;
    order.push_back(v);
    for (int c : consumers[v])
      if (--pending[c] == 0) ready.push_back(c);
  }
  for (int i = 0; i < n; ++i)
    if (!placed[i]) order.push_back(i);

  std::vector<double> wp(wires.size(), 0.5);  // per-wire p1
  auto wire_p = [&](const std::string& name) -> double {
    if (name == "1'b0") return 0.0;
    if (name == "1'b1") return 1.0;
    auto it = wire_index.find(name);
    return it == wire_index.end() ? 0.5 : wp[it->second];
  };

  std::vector<double> node_p(n, 0.5);
  ProbAssignment pa;
  pa.converged = false;

  double prev_delta = 0.0;
  bool damp = false;
  const int max_sweeps = 50;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (int v : order) {
      const Cell& c = nl.cells[v];
      const CellType* ct = lib.find(c.type);
      GateKind kind = ct ? ct->kind : GateKind::Other;
      // Align inputs with the library pin order so that semantic slots
      // (mux select, flop data) land where gate_p1 expects them; unbound
      // pins default to 0.5. Synthesized pin names (JSON-loaded graphs)
      // match nothing and keep their stored order.
      std::vector<double> in;
      int matched = 0;
      if (ct) {
        in.assign(ct->inputs.size(), 0.5);
        for (size_t k = 0; k < ct->inputs.size(); ++k)
          for (const PinBinding& pb : c.inputs)
            if (pb.pin == ct->inputs[k]) {
              in[k] = wire_p(pb.wire);
              ++matched;
            }
      }
      if (matched == 0) {
        in.clear();
        in.reserve(c.inputs.size());
        for (const PinBinding& pb : c.inputs) in.push_back(wire_p(pb.wire));
      }
      double target = gate_p1(kind, in);
      double next = damp ? 0.5 * (node_p[v] + target) : target;
      max_delta = std::max(max_delta, std::abs(next - node_p[v]));
      node_p[v] = next;
      for (const PinBinding& pb : c.outputs) {
        // multi-output cells: OTHER semantics give every pin the node value
        wp[wire_index[pb.wire]] = next;
      }
    }
    pa.sweeps = sweep + 1;
    if (max_delta < 1e-9) {
      pa.converged = true;
      break;
    }
    if (sweep > 0 && max_delta >= prev_delta) damp = true;
    prev_delta = max_delta;
  }

  pa.p1 = std::move(node_p);
  pa.p0.resize(n);
  for (int i = 0; i < n; ++i) pa.p0[i] = 1.0 - pa.p1[i];
  return pa;
}

FeatureMatrix assemble(const Eaug& g, FeatureMode mode, const ProbAssignment& probs,
                       const Degrees& degs, const std::vector<int>& dist_pi,
                       const std::vector<int>& dist_po) {
  const int n = g.node_count;
  auto covers = [&](size_t sz) { return static_cast<int>(sz) == n; };
  if (!covers(degs.in.size()) || !covers(degs.out.size()))
    fail(Errc::mode_mismatch, "degree vectors do not cover the graph");
  if (mode == FeatureMode::Netlist46 &&
      (!covers(probs.p1.size()) || !covers(dist_pi.size()) || !covers(dist_po.size())))
    fail(Errc::mode_mismatch, "component vectors do not cover the graph");

  FeatureMatrix fm;
  fm.mode = mode;
  fm.rows = n;
  fm.cols = feature_dim(mode);
  fm.data.assign(static_cast<size_t>(n) * fm.cols, 0.0);
  for (int v = 0; v < n; ++v) {
    int t = g.node_types[v];
    if (t < 0 || t >= kTypeBlock)
      fail(Errc::mode_mismatch, "type index " + std::to_string(t) + " outside the one-hot block");
    if (mode == FeatureMode::Baseline40) {
      fm.at(v, t) = 1.0;
    } else {
      fm.at(v, 0) = degs.in[v];
      fm.at(v, 1) = degs.out[v];
      fm.at(v, 2 + t) = 1.0;
      fm.at(v, 42) = dist_pi[v];
      fm.at(v, 43) = dist_po[v];
      fm.at(v, 44) = probs.p0[v];
      fm.at(v, 45) = probs.p1[v];
    }
  }
  return fm;
}

std::vector<int> standardized_columns(FeatureMode mode) {
  if (mode == FeatureMode::Baseline40) return {};
  return {0, 1, 42, 43, 44, 45};
}

FeatureMatrix standardize(const FeatureMatrix& fm, bool fit) {
  FeatureMatrix out = fm;
  std::vector<int> cols = standardized_columns(fm.mode);
  if (fit) {
    out.stats.clear();
    for (int c : cols) {
      double mean = 0.0;
      for (int r = 0; r < fm.rows; ++r) mean += fm.at(r, c);
      if (fm.rows > 0) mean /= fm.rows;
      double var = 0.0;
      for (int r = 0; r < fm.rows; ++r) {
        double d = fm.at(r, c) - mean;
        var += d * d;
      }
      if (fm.rows > 0) var /= fm.rows;
      out.stats.push_back({c, mean, std::sqrt(var)});
    }
  } else if (!cols.empty() && out.stats.empty()) {
    fail(Errc::stats_missing, "standardize(fit=false) without fitted stats");
  }
  for (const ColumnStats& cs : out.stats) {
    for (int r = 0; r < out.rows; ++r) {
      double v = out.at(r, cs.column);
      out.at(r, cs.column) = cs.stddev == 0.0 ? 0.0 : (v - cs.mean) / cs.stddev;
    }
  }
  out.standardized = true;
  return out;
}

FeatureMatrix compute_features(const Netlist& nl, const CellLibrary& lib, const Eaug& g,
                               FeatureMode mode) {
  Degrees degs = degrees(g);
  if (mode == FeatureMode::Baseline40)
    return assemble(g, mode, ProbAssignment{}, degs, {}, {});
  ProbAssignment probs = static_probabilities(nl, lib);
  std::vector<int> dpi = min_dist_to_anchors(g, g.pi_set);
  std::vector<int> dpo = min_dist_to_anchors(g, g.po_set);
  return assemble(g, mode, probs, degs, dpi, dpo);
}

std::string write_feature_json(const FeatureMatrix& fm, const Netlist& nl) {
  nlohmann::json j;
  j["name"] = nl.name;
  j["mode"] = feature_mode_name(fm.mode);
  j["standardized"] = fm.standardized;
  nlohmann::json stats = nlohmann::json::array();
  for (const ColumnStats& cs : fm.stats)
    stats.push_back({{"column", cs.column}, {"mean", cs.mean}, {"stddev", cs.stddev}});
  j["stats"] = std::move(stats);
  nlohmann::json ids = nlohmann::json::array();
  for (const Cell& c : nl.cells) ids.push_back(c.instance);
  j["node_ids"] = std::move(ids);
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < fm.rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < fm.cols; ++c) row.push_back(fm.at(r, c));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

FeatureMatrix parse_feature_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::schema_error, std::string("feature file: ") + e.what());
  }
  FeatureMatrix fm;
  fm.mode = feature_mode_from_name(j.at("mode").get<std::string>());
  fm.standardized = j.value("standardized", false);
  for (const auto& s : j.at("stats"))
    fm.stats.push_back({s.at("column").get<int>(), s.at("mean").get<double>(),
                        s.at("stddev").get<double>()});
  fm.cols = feature_dim(fm.mode);
  for (const auto& row : j.at("rows")) {
    if (static_cast<int>(row.size()) != fm.cols)
      fail(Errc::schema_error, "feature row width mismatch");
    for (const auto& v : row) fm.data.push_back(v.get<double>());
    ++fm.rows;
  }
  return fm;
}

}  // namespace nhtd
