// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/sampler.hpp"

#include <algorithm>
#include <unordered_set>

#include "nhtd/errors.hpp"

namespace nhtd {

std::vector<std::vector<int>> trojan_sampling(const std::vector<int>& v_t,
                                              const std::vector<int>& v_n, int m,
                                              std::mt19937_64& rng) {
  if (m < 1) fail(Errc::invalid_m, "m = " + std::to_string(m));
  std::unordered_set<int> tset(v_t.begin(), v_t.end());
  for (int v : v_n)
    if (tset.count(v)) fail(Errc::overlapping_sets, "node " + std::to_string(v));

  std::vector<int> normals = v_n;
  std::shuffle(normals.begin(), normals.end(), rng);
  const size_t cap = (normals.size() + m - 1) / m;  // ceil(|v_n|/m); 0 when v_n empty

  std::vector<std::vector<int>> batches(m);
  size_t pos = 0;
  for (int i = 0; i < m; ++i) {
    std::vector<int>& b = batches[i];
    size_t take = std::min(cap, normals.size() - pos);
    b.assign(normals.begin() + pos, normals.begin() + pos + take);
    pos += take;
    b.insert(b.end(), v_t.begin(), v_t.end());
    std::sort(b.begin(), b.end());
  }
  return batches;
}

std::vector<MiniBatch> make_batches(const Eaug& g, const FeatureMatrix& fm, int m,
                                    std::mt19937_64& rng, BatchContext context) {
  if (fm.rows != g.node_count) fail(Errc::shape_mismatch, "feature rows != node count");
  std::vector<int> v_t, v_n;
  for (int v = 0; v < g.node_count; ++v)
    (g.labels[v] == NodeLabel::Trojan ? v_t : v_n).push_back(v);

  std::vector<MiniBatch> out;
  for (std::vector<int>& nodes : trojan_sampling(v_t, v_n, m, rng)) {
    MiniBatch mb;
    mb.node_set = std::move(nodes);
    if (context == BatchContext::Induced) {
      Subgraph s = induced_subgraph(g, mb.node_set);
      mb.graph = std::move(s.graph);
      mb.parent_index = std::move(s.parent_index);
      mb.loss_rows.resize(mb.parent_index.size());
      for (size_t i = 0; i < mb.loss_rows.size(); ++i) mb.loss_rows[i] = static_cast<int>(i);
    } else {
      mb.graph = g;
      mb.parent_index.resize(g.node_count);
      for (int i = 0; i < g.node_count; ++i) mb.parent_index[i] = i;
      mb.loss_rows = mb.node_set;
    }
    mb.features.mode = fm.mode;
    mb.features.cols = fm.cols;
    mb.features.rows = static_cast<int>(mb.parent_index.size());
    mb.features.stats = fm.stats;
    mb.features.standardized = fm.standardized;
    mb.features.data.reserve(static_cast<size_t>(mb.features.rows) * fm.cols);
    for (int p : mb.parent_index)
      mb.features.data.insert(mb.features.data.end(), fm.row(p), fm.row(p) + fm.cols);
    mb.targets.reserve(mb.parent_index.size());
    for (int p : mb.parent_index)
      mb.targets.push_back(g.labels[p] == NodeLabel::Trojan
                               ? std::array<double, 2>{0.0, 1.0}
                               : std::array<double, 2>{1.0, 0.0});
    out.push_back(std::move(mb));
  }
  return out;
}

}  // namespace nhtd
