// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "nhtd/errors.hpp"
#include "nhtd/rng_util.hpp"

namespace nhtd {

MetricSet metrics(const Confusion& c) {
  auto ratio = [](double num, double den) { return den == 0.0 ? 0.0 : num / den; };
  MetricSet m;
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.f1 = ratio(2.0 * m.recall * m.precision, m.recall + m.precision);
  m.accuracy = ratio(c.tp + c.tn, static_cast<double>(c.total()));
  return m;
}

Confusion confusion_from(const std::vector<NodeLabel>& truth,
                         const std::vector<NodeLabel>& predicted) {
  if (truth.size() != predicted.size()) fail(Errc::shape_mismatch, "label vectors differ in size");
  Confusion c;
  for (size_t i = 0; i < truth.size(); ++i) {
    bool t = truth[i] == NodeLabel::Trojan;
    bool p = predicted[i] == NodeLabel::Trojan;
    if (t && p)
      ++c.tp;
    else if (t && !p)
      ++c.fn;
    else if (!t && p)
      ++c.fp;
    else
      ++c.tn;
  }
  return c;
}

MetricsReport make_report(std::vector<ReportRow> rows, std::string config_echo) {
  MetricsReport rep;
  rep.rows = std::move(rows);
  rep.config_echo = std::move(config_echo);
  if (!rep.rows.empty()) {
    for (const ReportRow& r : rep.rows) {
      rep.average.recall += r.m.recall;
      rep.average.precision += r.m.precision;
      rep.average.f1 += r.m.f1;
      rep.average.accuracy += r.m.accuracy;
    }
    double n = static_cast<double>(rep.rows.size());
    rep.average.recall /= n;
    rep.average.precision /= n;
    rep.average.f1 /= n;
    rep.average.accuracy /= n;
  }
  return rep;
}

ReportFormat report_format_from_name(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  if (s == "text") return ReportFormat::Text;
  fail(Errc::bad_config, "unknown report format '" + s + "'");
}

std::string format_metric(double v) {
  long long scaled = std::llround(v * 1000.0);  // half-up for the non-negative metrics
  std::ostringstream ss;
  ss << scaled / 1000 << '.';
  long long frac = scaled % 1000;
  ss << static_cast<char>('0' + frac / 100) << static_cast<char>('0' + (frac / 10) % 10)
     << static_cast<char>('0' + frac % 10);
  return ss.str();
}

namespace {

nlohmann::json metricset_json(const MetricSet& m) {
  return {{"recall", m.recall}, {"precision", m.precision}, {"f1", m.f1},
          {"accuracy", m.accuracy}};
}

MetricSet metricset_from(const nlohmann::json& j) {
  MetricSet m;
  m.recall = j.at("recall").get<double>();
  m.precision = j.at("precision").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.accuracy = j.at("accuracy").get<double>();
  return m;
}

}  // namespace

std::string render_report(const MetricsReport& rep, ReportFormat fmt) {
  if (fmt == ReportFormat::Json) {
    nlohmann::json j;
    j["config"] = rep.config_echo.empty() ? nlohmann::json(nullptr)
                                          : nlohmann::json::parse(rep.config_echo);
    nlohmann::json rows = nlohmann::json::array();
    for (const ReportRow& r : rep.rows) {
      nlohmann::json row = metricset_json(r.m);
      row["netlist"] = r.netlist;
      row["tn"] = r.confusion.tn;
      row["fp"] = r.confusion.fp;
      row["fn"] = r.confusion.fn;
      row["tp"] = r.confusion.tp;
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["average"] = metricset_json(rep.average);
    return j.dump(2) + "\n";
  }

  if (fmt == ReportFormat::Csv) {
    std::ostringstream ss;
    ss << "Netlist,TN,FP,FN,TP,Recall,Precision,F1,Accuracy\n";
    for (const ReportRow& r : rep.rows) {
      ss << r.netlist << ',' << r.confusion.tn << ',' << r.confusion.fp << ',' << r.confusion.fn
         << ',' << r.confusion.tp << ',' << format_metric(r.m.recall) << ','
         << format_metric(r.m.precision) << ',' << format_metric(r.m.f1) << ','
         << format_metric(r.m.accuracy) << '\n';
    }
    ss << "Average,,,,," << format_metric(rep.average.recall) << ','
       << format_metric(rep.average.precision) << ',' << format_metric(rep.average.f1) << ','
       << format_metric(rep.average.accuracy) << '\n';
    return ss.str();
  }

  // text table
  size_t name_w = 7;  // "Average"
  for (const ReportRow& r : rep.rows) name_w = std::max(name_w, r.netlist.size());
  std::ostringstream ss;
  auto pad = [&](const std::string& s, size_t w) {
    ss << s;
    for (size_t i = s.size(); i < w + 2; ++i) ss << ' ';
  };
  pad("Netlist", name_w);
  for (const char* h : {"TN", "FP", "FN", "TP"}) pad(h, 8);
  for (const char* h : {"Recall", "Precision", "F1", "Accuracy"}) pad(h, 9);
  ss << '\n';
  for (const ReportRow& r : rep.rows) {
    pad(r.netlist, name_w);
    pad(std::to_string(r.confusion.tn), 8);
    pad(std::to_string(r.confusion.fp), 8);
    pad(std::to_string(r.confusion.fn), 8);
    pad(std::to_string(r.confusion.tp), 8);
    pad(format_metric(r.m.recall), 9);
    pad(format_metric(r.m.precision), 9);
    pad(format_metric(r.m.f1), 9);
    pad(format_metric(r.m.accuracy), 9);
    ss << '\n';
  }
  pad("Average", name_w);
  for (int i = 0; i < 4; ++i) pad("-", 8);
  pad(format_metric(rep.average.recall), 9);
  pad(format_metric(rep.average.precision), 9);
  pad(format_metric(rep.average.f1), 9);
  pad(format_metric(rep.average.accuracy), 9);
  ss << '\n';
  return ss.str();
}

MetricsReport parse_report_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::schema_error, std::string("report: ") + e.what());
  }
  MetricsReport rep;
  if (j.contains("config") && !j.at("config").is_null())
    rep.config_echo = j.at("config").dump();
  for (const auto& row : j.at("rows")) {
    ReportRow r;
    r.netlist = row.at("netlist").get<std::string>();
    r.confusion.tn = row.at("tn").get<long>();
    r.confusion.fp = row.at("fp").get<long>();
    r.confusion.fn = row.at("fn").get<long>();
    r.confusion.tp = row.at("tp").get<long>();
    r.m = metricset_from(row);
    rep.rows.push_back(std::move(r));
  }
  rep.average = metricset_from(j.at("average"));
  return rep;
}

namespace {

struct GraphBundle {
  std::string name;
  Eaug graph;
  FeatureMatrix features;  // unstandardized
};

std::vector<ColumnStats> fit_stats_over(const std::vector<const FeatureMatrix*>& fms,
                                        FeatureMode mode) {
  FeatureMatrix pooled;
  pooled.mode = mode;
  pooled.cols = feature_dim(mode);
  for (const FeatureMatrix* fm : fms) {
    pooled.data.insert(pooled.data.end(), fm->data.begin(), fm->data.end());
    pooled.rows += fm->rows;
  }
  return standardize(pooled, true).stats;
}

std::string config_json_text(const ModelConfig& c) {
  nlohmann::json j = {
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
  return j.dump();
}

void run_parallel(int n, int jobs, const std::function<void(int)>& work) {
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  int count = std::min(jobs, n);
  for (int t = 0; t < count; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) break;
        work(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

MetricsReport loocv(const std::vector<DatasetEntry>& dataset, const CellLibrary& lib,
                    const ModelConfig& config, int jobs) {
  if (dataset.size() < 2) fail(Errc::insufficient_data, "LOOCV needs at least 2 netlists");
  validate_config(config);

  std::vector<GraphBundle> bundles(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    bundles[i].name = dataset[i].name;
    bundles[i].graph = build_eaug(dataset[i].netlist, lib);
    bundles[i].features =
        compute_features(dataset[i].netlist, lib, bundles[i].graph, config.feature_mode);
  }

  const int folds = static_cast<int>(dataset.size());
  std::vector<ReportRow> rows(folds);
  std::exception_ptr first_error;
  std::mutex error_mu;

  run_parallel(folds, jobs, [&](int fold) {
    try {
      std::vector<const FeatureMatrix*> train_fms;
      for (int j = 0; j < folds; ++j)
        if (j != fold) train_fms.push_back(&bundles[j].features);
      std::vector<ColumnStats> stats = fit_stats_over(train_fms, config.feature_mode);

      std::vector<TrainGraph> train_set;
      for (int j = 0; j < folds; ++j) {
        if (j == fold) continue;
        TrainGraph tg;
        tg.name = bundles[j].name;
        tg.graph = bundles[j].graph;
        FeatureMatrix fm = bundles[j].features;
        fm.stats = stats;
        tg.features = standardize(fm, false);
        train_set.push_back(std::move(tg));
      }
      ModelConfig fold_config = config;
      fold_config.seed = mix_seed(config.seed, 0xF01D0000ULL + fold);
      TrainResult tr = train(train_set, fold_config, stats);

      FeatureMatrix test_fm = bundles[fold].features;
      test_fm.stats = stats;
      test_fm = standardize(test_fm, false);
      Detection det = detect(tr.model, bundles[fold].graph, test_fm);

      ReportRow row;
      row.netlist = bundles[fold].name;
      row.confusion = confusion_from(bundles[fold].graph.labels, det.labels);
      row.m = metrics(row.confusion);
      rows[fold] = std::move(row);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_error) first_error = std::current_exception();
    }
  });
  if (first_error) std::rethrow_exception(first_error);

  return make_report(std::move(rows), config_json_text(config));
}

std::vector<std::array<int, 3>> enumerate_grid(const GridSpec& grid) {
  if (grid.batches.empty() || grid.layers.empty() || grid.units.empty())
    fail(Errc::empty_grid, "every grid dimension needs at least one value");
  std::vector<std::array<int, 3>> cells;
  for (int b : grid.batches)
    for (int l : grid.layers)
      for (int u : grid.units) cells.push_back({b, l, u});
  return cells;
}

int select_best_cell(const std::vector<GridCell>& cells) {
  if (cells.empty()) fail(Errc::empty_grid, "no cells evaluated");
  // a metric is "won" by a cell iff its value is the unique strict maximum
  auto winner_of = [&](auto get) -> int {
    int best = 0;
    bool unique = true;
    for (size_t i = 1; i < cells.size(); ++i) {
      double v = get(cells[i].avg), b = get(cells[best].avg);
      if (v > b) {
        best = static_cast<int>(i);
        unique = true;
      } else if (v == b) {
        unique = false;
      }
    }
    return unique ? best : -1;
  };
  int wr = winner_of([](const MetricSet& m) { return m.recall; });
  int wp = winner_of([](const MetricSet& m) { return m.precision; });
  int wf = winner_of([](const MetricSet& m) { return m.f1; });
  std::vector<int> wins(cells.size(), 0);
  for (int w : {wr, wp, wf})
    if (w >= 0) ++wins[w];
  for (size_t i = 0; i < cells.size(); ++i)
    if (wins[i] >= 2) return static_cast<int>(i);

  // fall back to F1, ties to the smallest (batches, layers, units)
  double best_f1 = cells[0].avg.f1;
  for (const GridCell& c : cells) best_f1 = std::max(best_f1, c.avg.f1);
  int pick = -1;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].avg.f1 != best_f1) continue;
    if (pick < 0) {
      pick = static_cast<int>(i);
      continue;
    }
    auto key = [](const GridCell& c) { return std::array<int, 3>{c.batches, c.layers, c.units}; };
    if (key(cells[i]) < key(cells[pick])) pick = static_cast<int>(i);
  }
  return pick;
}

GridResult grid_search(const std::vector<DatasetEntry>& dataset, const CellLibrary& lib,
                       const GridSpec& grid, const ModelConfig& base, int jobs) {
  std::vector<std::array<int, 3>> cells = enumerate_grid(grid);
  GridResult res;
  res.table.resize(cells.size());
  for (size_t i = 0; i < cells.size(); ++i) {
    ModelConfig c = base;
    c.num_batches = cells[i][0];
    c.num_layers = cells[i][1];
    c.hidden_units = cells[i][2];
    MetricsReport rep = loocv(dataset, lib, c, jobs);
    res.table[i] = {cells[i][0], cells[i][1], cells[i][2], rep.average};
  }
  int best = select_best_cell(res.table);
  res.best = base;
  res.best.num_batches = res.table[best].batches;
  res.best.num_layers = res.table[best].layers;
  res.best.hidden_units = res.table[best].units;
  return res;
}

}  // namespace nhtd
