// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_CELL_LIBRARY_HPP
#define NHTD_CELL_LIBRARY_HPP

#include <string>
#include <unordered_map>
#include <vector>

namespace nhtd {

// Behavior classes a cell can fall into. Cells whose logic function is not
// expressible as one of the primitive kinds (AOI/OAI, adders, wide muxes)
// are classed Other and get the neutral 0.5 treatment in probability
// propagation.
enum class GateKind {
  And,
  Or,
  Nand,
  Nor,
  Xor,
  Xnor,
  Inv,
  Buf,
  Mux,   // 2:1 mux, input order (S, A, B): out = S ? B : A
  Dff,   // input order starts with the data pin
  Latch,
  Pi,
  Po,
  Other,
};

const char* gate_kind_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);

struct CellType {
  std::string name;
  int type_index = 0;  // position in the node-type one-hot block, 0..39
  std::vector<std::string> inputs;   // semantic order (D first for flops, S first for muxes)
  std::vector<std::string> outputs;
  GateKind kind = GateKind::Other;
};

// Cell catalog mapping instance type names to pin lists and behavior.
// Exactly one PI entry and one PO entry; type indices are unique and
// cover [0, size).
class CellLibrary {
 public:
  // The built-in 40-type library (38 gate/storage cells plus PI and PO).
  static CellLibrary standard();

  // Loads a user library from JSON: { "NAME": {"type_index": int,
  // "inputs": [..], "outputs": [..], "kind": "AND"|... }, ... }
  static CellLibrary from_json(const std::string& text);
  static CellLibrary from_file(const std::string& path);

  const CellType* find(const std::string& name) const;
  // Lookup that throws UnknownCell.
  const CellType& at(const std::string& name) const;

  const std::string& pi_name() const { return pi_name_; }
  const std::string& po_name() const { return po_name_; }
  int type_count() const { return static_cast<int>(order_.size()); }

  const std::vector<std::string>& names() const { return order_; }

 private:
  void insert(CellType ct);
  void validate() const;

  std::unordered_map<std::string, CellType> entries_;
  std::vector<std::string> order_;  // by type_index
  std::string pi_name_, po_name_;
};

}  // namespace nhtd

#endif  // NHTD_CELL_LIBRARY_HPP
