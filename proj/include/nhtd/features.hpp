// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_FEATURES_HPP
#define NHTD_FEATURES_HPP

#include <string>
#include <utility>
#include <vector>

#include "nhtd/cell_library.hpp"
#include "nhtd/eaug.hpp"
#include "nhtd/netlist.hpp"

namespace nhtd {

// Feature layouts. Netlist46: [in_deg, out_deg, 40-type one-hot,
// dist_to_PI, dist_to_PO, p0, p1]. Baseline40: the one-hot block only.
enum class FeatureMode { Netlist46, Baseline40 };

const char* feature_mode_name(FeatureMode m);
FeatureMode feature_mode_from_name(const std::string& s);

constexpr int kTypeBlock = 40;
constexpr int kNetlist46Dim = 46;
constexpr int kBaseline40Dim = 40;

inline int feature_dim(FeatureMode m) {
  return m == FeatureMode::Netlist46 ? kNetlist46Dim : kBaseline40Dim;
}

struct ColumnStats {
  int column = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population

  bool operator==(const ColumnStats&) const = default;
};

struct FeatureMatrix {
  FeatureMode mode = FeatureMode::Netlist46;
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major
  std::vector<ColumnStats> stats;
  bool standardized = false;

  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }
};

struct Degrees {
  std::vector<int> in, out;
};

// In/out degree split by stored edge direction (out = forward entries).
Degrees degrees(const Eaug& g);

// Undirected BFS hop count to the nearest anchor; anchors get 0,
// unreachable nodes (or an empty anchor set) get the sentinel -1.
std::vector<int> min_dist_to_anchors(const Eaug& g, const std::vector<int>& anchors);

struct ProbAssignment {
  std::vector<double> p0, p1;  // per node; p0 + p1 == 1
  bool converged = true;
  int sweeps = 0;
};

// Static signal probabilities under the input-independence assumption.
// Primary inputs hold p1 = 0.5; gates combine input probabilities by
// behavior kind; flop and latch outputs take the data-input probability;
// OTHER cells emit 0.5. Fixed-point sweeps (init 0.5) run until the max
// per-node change drops below 1e-9 or 50 sweeps elapse, with 0.5 damping
// once a sweep stops contracting. Exact on fanout-free circuits.
ProbAssignment static_probabilities(const Netlist& nl, const CellLibrary& lib);

// Column assembly per mode. Throws ModeMismatch when component vectors do
// not cover every node of g.
FeatureMatrix assemble(const Eaug& g, FeatureMode mode, const ProbAssignment& probs,
                       const Degrees& degs, const std::vector<int>& dist_pi,
                       const std::vector<int>& dist_po);

// Columns outside the one-hot block are shifted/scaled to zero mean and
// unit (population) variance. fit=true learns stats from fm itself;
// fit=false applies fm.stats as-is and throws StatsMissing if absent.
// Zero-variance columns map to all zeros.
FeatureMatrix standardize(const FeatureMatrix& fm, bool fit);

// Columns that standardize() touches for a mode (indices into the row).
std::vector<int> standardized_columns(FeatureMode mode);

// Convenience pipeline: EAUG + netlist -> unstandardized features.
FeatureMatrix compute_features(const Netlist& nl, const CellLibrary& lib, const Eaug& g,
                               FeatureMode mode);

// Feature file (JSON): header with mode/stats plus per-node rows.
std::string write_feature_json(const FeatureMatrix& fm, const Netlist& nl);
FeatureMatrix parse_feature_json(const std::string& text);

}  // namespace nhtd

#endif  // NHTD_FEATURES_HPP
