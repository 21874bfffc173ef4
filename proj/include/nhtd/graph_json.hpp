// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_GRAPH_JSON_HPP
#define NHTD_GRAPH_JSON_HPP

#include <string>

#include "nhtd/netlist.hpp"

namespace nhtd {

// Canonical graph JSON:
//   {"name": str,
//    "nodes": [{"id": str, "type": str, "label": "normal"|"trojan"}, ...],
//    "edges": [{"from": id, "to": id}, ...],          // directed driver->sink
//    "primary_inputs": [id, ...], "primary_outputs": [id, ...]}
//
// Canonical form: object keys sorted, nodes in netlist order, edges sorted
// by (from, to) node position, two-space indentation, trailing newline.
// write(parse(x)) is byte-identical for canonical input; parse(write(x))
// preserves the graph view (pin/wire names are not carried by the format,
// so asymmetric pin roles are re-synthesized in edge order on load).
std::string write_graph_json(const Netlist& nl);
Netlist parse_graph_json(const std::string& text);

Netlist read_graph_json_file(const std::string& path);
void write_graph_json_file(const Netlist& nl, const std::string& path);

// Loads either format by extension: ".v" -> Verilog, otherwise JSON.
Netlist load_netlist_auto(const std::string& path, const CellLibrary& lib);

}  // namespace nhtd

#endif  // NHTD_GRAPH_JSON_HPP
