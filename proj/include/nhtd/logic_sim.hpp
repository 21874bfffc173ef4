// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_LOGIC_SIM_HPP
#define NHTD_LOGIC_SIM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nhtd/cell_library.hpp"
#include "nhtd/netlist.hpp"

namespace nhtd {
namespace sim {

struct Options {
  std::map<std::string, bool> force;  // wire -> pinned value (after aliasing)
  bool dff_state = false;             // value presented by every flop/latch output
  int max_sweeps = 64;                // combinational cycles settle by iteration
};

struct Result {
  std::map<std::string, bool> wires;
  bool settled = true;
};

// Zero-delay combinational evaluation of a netlist under one primary-input
// vector (aligned with nl.primary_inputs). Flop and latch outputs are held
// at `dff_state` rather than clocked; forced wires override their driver.
// Cells of the default library evaluate exactly (including AOI/OAI, HA/FA,
// MUX4); unknown OTHER cells emit 0.
Result evaluate(const Netlist& nl, const CellLibrary& lib, const std::vector<bool>& pi_values,
                const Options& opt = {});

// Compares two netlists on `outputs` (wire names present in both) over
// either the exhaustive PI space (when |PI| <= exhaustive_limit) or
// `random_vectors` seeded random vectors. Both netlists must list the same
// primary inputs. Returns the first mismatching vector description, empty
// when equivalent.
struct EquivalenceCheck {
  bool equivalent = true;
  long vectors = 0;
  std::string mismatch;  // human-readable description of the first failure
};

EquivalenceCheck compare_outputs(const Netlist& a, const Netlist& b, const CellLibrary& lib,
                                 const Options& opt_a, const Options& opt_b,
                                 int exhaustive_limit = 10, int random_vectors = 10000,
                                 std::uint64_t seed = 1);

}  // namespace sim
}  // namespace nhtd

#endif  // NHTD_LOGIC_SIM_HPP
