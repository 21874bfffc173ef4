// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_VERILOG_HPP
#define NHTD_VERILOG_HPP

#include <string>

#include "nhtd/cell_library.hpp"
#include "nhtd/netlist.hpp"

namespace nhtd {

// Parses a single structural Verilog module against a cell library.
//
// Supported subset:
//   - one `module ... endmodule` with a non-ANSI header port list
//   - `input` / `output` / `wire` declarations, optionally with a bit
//     range `[h:l]` which is expanded to per-bit wires `name[i]`
//   - cell instantiations with named (`.PIN(wire)`) or positional
//     connections; positional order is the library's inputs then outputs
//   - `assign a = b;` restricted to plain wire aliasing
//   - constants 1'b0 / 1'b1 as sink-only tie nets
//   - `//` and `/* */` comments
//
// Behavioral constructs, expressions, hierarchy and tri-state are out of
// scope and reported as SyntaxError. The result carries one node per
// instantiated cell plus PI/PO pseudo-cells per port bit, ordered PIs,
// gates (source order), POs. All labels start as Normal.
Netlist parse_verilog(const std::string& source, const CellLibrary& lib);
Netlist parse_verilog_file(const std::string& path, const CellLibrary& lib);

}  // namespace nhtd

#endif  // NHTD_VERILOG_HPP
