// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_NETLIST_HPP
#define NHTD_NETLIST_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "nhtd/cell_library.hpp"

namespace nhtd {

enum class NodeLabel : std::uint8_t { Normal = 0, Trojan = 1 };

struct PinBinding {
  std::string pin;
  std::string wire;
};

// One node of the netlist graph. Primary inputs and outputs are carried as
// pseudo-cells (type PI/PO) whose instance id equals the port wire name.
struct Cell {
  std::string instance;
  std::string type;  // cell library name; resolved lazily against a CellLibrary
  std::vector<PinBinding> inputs;   // semantic order when known (lib pin order)
  std::vector<PinBinding> outputs;
};

// Wires that may appear as sinks without carrying a driver: constant ties.
inline bool is_tie_wire(const std::string& w) { return w == "1'b0" || w == "1'b1"; }

struct Netlist {
  std::string name;
  std::vector<Cell> cells;  // stable order: PIs, gates (source order), POs
  std::vector<std::string> primary_inputs;   // wire names == PI pseudo-cell ids
  std::vector<std::string> primary_outputs;  // wire names == PO pseudo-cell ids
  std::vector<NodeLabel> labels;             // aligned with cells

  int node_count() const { return static_cast<int>(cells.size()); }
  int trojan_count() const;

  // Instance id -> cell index; built lazily, invalidated by hand edits.
  int index_of(const std::string& instance) const;
  void rebuild_index();

 private:
  mutable std::unordered_map<std::string, int> index_;
};

// Driver/sink view of the wires of a netlist. `driver` is -1 for wires
// without one (primary-input wires have their PI pseudo-cell as driver;
// constant ties and floating wires have none).
struct Wire {
  std::string name;
  int driver = -1;                 // cell index
  std::string driver_pin;
  std::vector<std::pair<int, std::string>> sinks;  // (cell index, pin)
};

// Extracts the wire table. Throws MultipleDrivers on a wire with two
// drivers. Wire order follows first appearance in cell order.
std::vector<Wire> build_wires(const Netlist& nl);

// Full invariant check: bindings resolve, single driver per wire, label
// vector aligned, PI/PO labels Normal, unique instance ids.
void validate(const Netlist& nl);

// Label assignment. A LabelSpec is either a regex over instance names or an
// explicit list of Trojan instance ids. A leading "(?i)" on the pattern
// selects case-insensitive matching (std::regex has no inline flags).
struct LabelSpec {
  enum class Kind { Regex, List } kind = Kind::Regex;
  std::string pattern = "(?i)trojan";
  std::vector<std::string> instances;

  static LabelSpec regex(std::string pat) {
    return LabelSpec{Kind::Regex, std::move(pat), {}};
  }
  static LabelSpec list(std::vector<std::string> ids) {
    return LabelSpec{Kind::List, "", std::move(ids)};
  }
  static LabelSpec list_from_file(const std::string& path);
};

// Returns a relabeled copy: matching nodes -> Trojan, everything else ->
// Normal. PI/PO pseudo-cells stay Normal regardless of the spec.
Netlist label_nodes(const Netlist& nl, const LabelSpec& spec);

// Structural equality on the graph view (name, nodes with types and labels,
// directed edge multiset, port sets). Pin and wire names are not compared;
// the canonical JSON format does not carry them.
bool graph_equal(const Netlist& a, const Netlist& b);

}  // namespace nhtd

#endif  // NHTD_NETLIST_HPP
