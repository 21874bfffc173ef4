// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/eaug.hpp"

#include <algorithm>

#include "nhtd/errors.hpp"

namespace nhtd {

Eaug build_eaug(const Netlist& nl, const CellLibrary& lib) {
  Eaug g;
  g.node_count = nl.node_count();
  g.adjacency.resize(g.node_count);
  g.node_types.reserve(g.node_count);
  g.labels = nl.labels;
  for (int i = 0; i < g.node_count; ++i) {
    const CellType& ct = lib.at(nl.cells[i].type);
    g.node_types.push_back(ct.type_index);
    if (ct.kind == GateKind::Pi) g.pi_set.push_back(i);
    if (ct.kind == GateKind::Po) g.po_set.push_back(i);
  }
  for (const Wire& w : build_wires(nl)) {
    if (w.driver < 0) continue;
    for (const auto& [sink, pin] : w.sinks) {
      g.adjacency[w.driver].push_back({sink, 1});
      g.adjacency[sink].push_back({w.driver, 0});
    }
  }
  return g;
}

const std::vector<AdjEntry>& neighbors(const Eaug& g, int v) {
  if (v < 0 || v >= g.node_count)
    fail(Errc::index_out_of_range, "node " + std::to_string(v) + " of " +
                                       std::to_string(g.node_count));
  return g.adjacency[v];
}

Subgraph induced_subgraph(const Eaug& g, const std::vector<int>& nodes) {
  Subgraph s;
  s.parent_index = nodes;
  std::sort(s.parent_index.begin(), s.parent_index.end());
  s.parent_index.erase(std::unique(s.parent_index.begin(), s.parent_index.end()),
                       s.parent_index.end());
  std::vector<int> local(g.node_count, -1);
  for (int i = 0; i < static_cast<int>(s.parent_index.size()); ++i) {
    int p = s.parent_index[i];
    if (p < 0 || p >= g.node_count)
      fail(Errc::index_out_of_range, "node " + std::to_string(p));
    local[p] = i;
  }
  Eaug& out = s.graph;
  out.node_count = static_cast<int>(s.parent_index.size());
  out.adjacency.resize(out.node_count);
  out.node_types.resize(out.node_count);
  out.labels.resize(out.node_count);
  for (int i = 0; i < out.node_count; ++i) {
    int p = s.parent_index[i];
    out.node_types[i] = g.node_types[p];
    out.labels[i] = g.labels[p];
    for (const AdjEntry& e : g.adjacency[p])
      if (local[e.neighbor] >= 0) out.adjacency[i].push_back({local[e.neighbor], e.forward});
  }
  for (int p : g.pi_set)
    if (local[p] >= 0) out.pi_set.push_back(local[p]);
  for (int p : g.po_set)
    if (local[p] >= 0) out.po_set.push_back(local[p]);
  return s;
}

}  // namespace nhtd
