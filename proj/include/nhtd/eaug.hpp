// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_EAUG_HPP
#define NHTD_EAUG_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "nhtd/cell_library.hpp"
#include "nhtd/netlist.hpp"

namespace nhtd {

// Edge-attributed undirected graph. Every wire driver->sink pair adds two
// adjacency entries; the attribute stored on node n's entry toward neighbor
// u is the attribute of the directed edge n->u: (1,0) when n drives u
// (forward, along signal flow), (0,1) when u drives n (backward). The
// attribute of the incoming edge u->n, as consumed by message passing, is
// the flip of the stored one.
struct AdjEntry {
  std::int32_t neighbor;
  std::uint8_t forward;  // 1: owner->neighbor follows the signal flow

  std::array<double, 2> edge_attr() const {
    return forward ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
  }
};

struct Eaug {
  int node_count = 0;
  std::vector<std::vector<AdjEntry>> adjacency;
  std::vector<int> node_types;  // library type_index per node
  std::vector<NodeLabel> labels;
  std::vector<int> pi_set, po_set;  // node indices of port pseudo-cells
};

// Netlist -> EAUG. Node order equals netlist cell order; fan-out of k
// yields k forward entries on the driver. Unknown cell types throw
// UnknownCell.
Eaug build_eaug(const Netlist& nl, const CellLibrary& lib);

// Both directions, stable order. Throws IndexOutOfRange.
const std::vector<AdjEntry>& neighbors(const Eaug& g, int v);

struct Subgraph {
  Eaug graph;
  std::vector<int> parent_index;  // local node -> parent node
};

// Keeps edges whose endpoints are both selected; attributes preserved.
// `nodes` may arrive in any order; local order is ascending parent index.
Subgraph induced_subgraph(const Eaug& g, const std::vector<int>& nodes);

}  // namespace nhtd

#endif  // NHTD_EAUG_HPP
