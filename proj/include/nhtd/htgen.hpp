// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_HTGEN_HPP
#define NHTD_HTGEN_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nhtd/cell_library.hpp"
#include "nhtd/netlist.hpp"

namespace nhtd {
namespace htgen {

enum class TriggerKind { Combinational, Sequential };
enum class PayloadKind { DenialOfService, InformationLeakage, PowerConsuming };

const char* trigger_kind_name(TriggerKind k);
const char* payload_kind_name(PayloadKind k);
TriggerKind trigger_kind_from_name(const std::string& s);
PayloadKind payload_kind_from_name(const std::string& s);

// Allowed parameter ranges: trigger_width 4..16, counter_bits 4..12,
// ring_length odd in 5..15.
struct HtParams {
  int trigger_width = 8;  // taps of the combinational AND/NOR tree
  int counter_bits = 8;   // bits of the sequential counter
  int ring_length = 7;    // inverters in the oscillator loop
};

struct HtTemplateSpec {
  TriggerKind trigger = TriggerKind::Combinational;
  PayloadKind payload = PayloadKind::DenialOfService;
  HtParams params;
};

// A detached piece of logic to be spliced into a host. Wires named in
// `taps` are placeholders rewired to host nets on insertion.
struct Subcircuit {
  std::vector<Cell> cells;
  std::vector<std::string> taps;      // external inputs to connect to host wires
  std::string trigger_out;            // wire carrying the trigger signal
};

// Combinational: a balanced tree of 2-input AND/NOR gates over
// `trigger_width` taps (static p1 of the root is 2^-k for independent 0.5
// taps). Sequential: a `counter_bits`-bit ripple counter enabled by one
// tap; the carry-out is the trigger. All instances carry the `trojan_`
// prefix. Throws ParamOutOfRange.
Subcircuit gen_trigger(TriggerKind kind, const HtParams& params, std::mt19937_64& rng);

// DenialOfService: an OR mask forced onto a victim wire when triggered.
// InformationLeakage: XOR of an internal wire onto a primary-output wire,
// gated by the trigger. PowerConsuming: a ring oscillator (odd inverter
// loop behind an AND enable) driven by the trigger, no victim.
// The returned subcircuit leaves the victim hookup to insert_ht: wires
// named "$victim_in"/"$victim_out"/"$leak_src" are placeholders.
Subcircuit gen_payload(PayloadKind kind, const HtParams& params, std::mt19937_64& rng);

struct InsertionResult {
  Netlist netlist;                         // host + HT, labels set
  HtTemplateSpec spec;                     // parameters actually used
  std::string trigger_wire;                // for dormancy checks
  std::vector<std::string> trojan_instances;
};

// Splices a randomly configured trigger/payload pair into the host:
// trigger taps attach to distinct internal host wires (PO nets excluded),
// the payload intercepts a random victim wire between its driver and
// sinks. Inserted nodes are labeled Trojan; host labels are preserved.
// The HT stays below 5% of the host node count (parameters are clamped,
// HostTooSmall if impossible). With a given `spec` the template choice is
// fixed and only the wiring is random.
InsertionResult insert_ht(const Netlist& host, const CellLibrary& lib,
                          const std::optional<HtTemplateSpec>& spec, std::mt19937_64& rng);

struct SampleRecord {
  std::string file;
  std::string host;
  int index = 0;
  std::uint64_t seed = 0;
  HtTemplateSpec spec;
  std::string trigger_wire;
  int nodes = 0;
  int trojan_nodes = 0;
  std::vector<std::string> trojan_instances;
};

struct GenManifest {
  std::uint64_t seed = 0;
  std::vector<SampleRecord> samples;
};

// Emits samples/<host>_<k>.json plus manifest.json under out_dir. Each
// sample seed derives from (seed, host index, k), so regeneration from the
// manifest reproduces the dataset byte for byte.
GenManifest gen_dataset(const std::vector<Netlist>& hosts, const CellLibrary& lib,
                        int samples_per_host, std::uint64_t seed, const std::string& out_dir);

std::string manifest_to_json(const GenManifest& m);

}  // namespace htgen
}  // namespace nhtd

#endif  // NHTD_HTGEN_HPP
