// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_EVALUATE_HPP
#define NHTD_EVALUATE_HPP

#include <array>
#include <string>
#include <vector>

#include "nhtd/gnn.hpp"
#include "nhtd/netlist.hpp"

namespace nhtd {

struct Confusion {
  long tp = 0, tn = 0, fp = 0, fn = 0;  // Trojan is the positive class
  long total() const { return tp + tn + fp + fn; }
};

struct MetricSet {
  double recall = 0.0, precision = 0.0, f1 = 0.0, accuracy = 0.0;
};

// Recall = TP/(TP+FN), Precision = TP/(TP+FP),
// F1 = 2*R*P/(R+P), Accuracy = (TP+TN)/total; 0/0 -> 0.0.
MetricSet metrics(const Confusion& c);

Confusion confusion_from(const std::vector<NodeLabel>& truth,
                         const std::vector<NodeLabel>& predicted);

struct ReportRow {
  std::string netlist;
  Confusion confusion;
  MetricSet m;
};

struct MetricsReport {
  std::vector<ReportRow> rows;
  MetricSet average;  // unweighted mean over rows
  std::string config_echo;  // JSON text of the evaluated configuration
};

MetricsReport make_report(std::vector<ReportRow> rows, std::string config_echo);

enum class ReportFormat { Csv, Json, Text };
ReportFormat report_format_from_name(const std::string& s);

// Column order: Netlist, TN, FP, FN, TP, Recall, Precision, F1, Accuracy;
// averages row last. Metric cells round half-up to 3 decimals in csv/text;
// JSON keeps full precision and round-trips bit-exactly.
std::string render_report(const MetricsReport& rep, ReportFormat fmt);
MetricsReport parse_report_json(const std::string& text);

// Half-up 3-decimal formatting used by the table renderers.
std::string format_metric(double v);

struct DatasetEntry {
  std::string name;
  Netlist netlist;
};

// Leave-one-out cross-validation: for each fold the standardization stats
// and the model are fitted on the remaining netlists only. Fold seeds
// derive from config.seed and the fold index, so results do not depend on
// evaluation order; `jobs` > 1 runs folds concurrently.
MetricsReport loocv(const std::vector<DatasetEntry>& dataset, const CellLibrary& lib,
                    const ModelConfig& config, int jobs = 1);

struct GridSpec {
  std::vector<int> batches = {1, 5, 10, 15, 20, 25, 30};
  std::vector<int> layers = {2, 3};
  std::vector<int> units = {16, 32};
};

struct GridCell {
  int batches = 0, layers = 0, units = 0;
  MetricSet avg;
};

// Cell enumeration order: batches outermost, then layers, then units.
std::vector<std::array<int, 3>> enumerate_grid(const GridSpec& grid);

// Winner rule: the cell that is strictly best on two or more of
// {recall, precision, f1}; otherwise highest F1; remaining ties go to the
// lexicographically smallest (batches, layers, units).
int select_best_cell(const std::vector<GridCell>& cells);

struct GridResult {
  ModelConfig best;
  std::vector<GridCell> table;
};

GridResult grid_search(const std::vector<DatasetEntry>& dataset, const CellLibrary& lib,
                       const GridSpec& grid, const ModelConfig& base, int jobs = 1);

}  // namespace nhtd

#endif  // NHTD_EVALUATE_HPP
