// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/htgen.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_set>

#include "json.hpp"

#include "nhtd/errors.hpp"
#include "nhtd/graph_json.hpp"
#include "nhtd/rng_util.hpp"

namespace nhtd {
namespace htgen {

const char* trigger_kind_name(TriggerKind k) {
  return k == TriggerKind::Combinational ? "combinational" : "sequential";
}
const char* payload_kind_name(PayloadKind k) {
  switch (k) {
    case PayloadKind::DenialOfService: return "denial_of_service";
    case PayloadKind::InformationLeakage: return "information_leakage";
    case PayloadKind::PowerConsuming: return "power_consuming";
  }
  return "denial_of_service";
}

TriggerKind trigger_kind_from_name(const std::string& s) {
  if (s == "combinational") return TriggerKind::Combinational;
  if (s == "sequential") return TriggerKind::Sequential;
  fail(Errc::bad_config, "unknown trigger kind '" + s + "'");
}

PayloadKind payload_kind_from_name(const std::string& s) {
  if (s == "denial_of_service") return PayloadKind::DenialOfService;
  if (s == "information_leakage") return PayloadKind::InformationLeakage;
  if (s == "power_consuming") return PayloadKind::PowerConsuming;
  fail(Errc::bad_config, "unknown payload kind '" + s + "'");
}

namespace {

constexpr int kMinTrigWidth = 4, kMaxTrigWidth = 16;
constexpr int kMinCounterBits = 4, kMaxCounterBits = 12;
constexpr int kMinRing = 5, kMaxRing = 15;

void check_params(TriggerKind tk, PayloadKind pk, const HtParams& p) {
  if (tk == TriggerKind::Combinational &&
      (p.trigger_width < kMinTrigWidth || p.trigger_width > kMaxTrigWidth))
    fail(Errc::param_out_of_range, "trigger_width " + std::to_string(p.trigger_width));
  if (tk == TriggerKind::Sequential &&
      (p.counter_bits < kMinCounterBits || p.counter_bits > kMaxCounterBits))
    fail(Errc::param_out_of_range, "counter_bits " + std::to_string(p.counter_bits));
  if (pk == PayloadKind::PowerConsuming &&
      (p.ring_length < kMinRing || p.ring_length > kMaxRing || p.ring_length % 2 == 0))
    fail(Errc::param_out_of_range,
         "ring_length " + std::to_string(p.ring_length) + " (odd 5..15)");
}

Cell make_cell(const std::string& inst, const std::string& type,
               std::vector<PinBinding> in, std::vector<PinBinding> out) {
  Cell c;
  c.instance = inst;
  c.type = type;
  c.inputs = std::move(in);
  c.outputs = std::move(out);
  return c;
}

int trigger_size(TriggerKind tk, const HtParams& p) {
  return tk == TriggerKind::Combinational ? p.trigger_width - 1 : 3 * p.counter_bits;
}

int payload_size(PayloadKind pk, const HtParams& p) {
  switch (pk) {
    case PayloadKind::DenialOfService: return 1;
    case PayloadKind::InformationLeakage: return 2;
    case PayloadKind::PowerConsuming: return p.ring_length + 1;
  }
  return 1;
}

}  // namespace

Subcircuit gen_trigger(TriggerKind kind, const HtParams& params, std::mt19937_64& rng) {
  Subcircuit sc;
  int gate_no = 0, wire_no = 0;
  auto wire = [&]() { return "trojan_t_w" + std::to_string(wire_no++); };

  if (kind == TriggerKind::Combinational) {
    check_params(kind, PayloadKind::DenialOfService, params);
    const int k = params.trigger_width;
    std::vector<std::string> level;
    for (int i = 0; i < k; ++i) {
      sc.taps.push_back("trojan_tap" + std::to_string(i));
      level.push_back(sc.taps.back());
    }
    bool leaf_level = true;
    while (level.size() > 1) {
      std::vector<std::string> next;
      for (size_t i = 0; i + 1 < level.size(); i += 2) {
        // NOR keeps the 0.25 one-probability only on raw 0.5 taps; deeper
        // levels must AND so rarity compounds multiplicatively
        bool use_nor = leaf_level && (rng() & 1);
        std::string out = wire();
        sc.cells.push_back(make_cell("trojan_t_g" + std::to_string(gate_no++),
                                     use_nor ? "NOR2" : "AND2",
                                     {{"A", level[i]}, {"B", level[i + 1]}}, {{"Y", out}}));
        next.push_back(out);
      }
      if (level.size() % 2) next.push_back(level.back());
      level = std::move(next);
      leaf_level = false;
    }
    sc.trigger_out = level[0];
    return sc;
  }

  check_params(kind, PayloadKind::DenialOfService, params);
  const int k = params.counter_bits;
  sc.taps.push_back("trojan_tap0");  // count enable
  sc.taps.push_back("trojan_tap1");  // clock
  std::string carry = sc.taps[0];
  for (int i = 0; i < k; ++i) {
    std::string bit = "trojan_t_b" + std::to_string(i);
    std::string d = wire();
    std::string next_carry = wire();
    sc.cells.push_back(make_cell("trojan_t_x" + std::to_string(i), "XOR2",
                                 {{"A", bit}, {"B", carry}}, {{"Y", d}}));
    sc.cells.push_back(make_cell("trojan_t_ff" + std::to_string(i), "DFF",
                                 {{"D", d}, {"CK", sc.taps[1]}}, {{"Q", bit}}));
    sc.cells.push_back(make_cell("trojan_t_a" + std::to_string(i), "AND2",
                                 {{"A", bit}, {"B", carry}}, {{"Y", next_carry}}));
    carry = next_carry;
  }
  sc.trigger_out = carry;
  return sc;
}

Subcircuit gen_payload(PayloadKind kind, const HtParams& params, std::mt19937_64& rng) {
  (void)rng;
  Subcircuit sc;
  switch (kind) {
    case PayloadKind::DenialOfService:
      sc.cells.push_back(make_cell("trojan_p_mask", "OR2",
                                   {{"A", "$victim_in"}, {"B", "$trigger"}},
                                   {{"Y", "$victim_out"}}));
      break;
    case PayloadKind::InformationLeakage:
      sc.cells.push_back(make_cell("trojan_p_gate", "AND2",
                                   {{"A", "$trigger"}, {"B", "$leak_src"}},
                                   {{"Y", "trojan_p_leak"}}));
      sc.cells.push_back(make_cell("trojan_p_xor", "XOR2",
                                   {{"A", "$victim_in"}, {"B", "trojan_p_leak"}},
                                   {{"Y", "$victim_out"}}));
      break;
    case PayloadKind::PowerConsuming: {
      check_params(TriggerKind::Combinational,
                   kind, params);
      const int len = params.ring_length;
      std::string head = "trojan_p_r0";
      std::string prev = head;
      for (int i = 0; i < len; ++i) {
        std::string out = "trojan_p_r" + std::to_string(i + 1);
        sc.cells.push_back(
            make_cell("trojan_p_inv" + std::to_string(i), "INV", {{"A", prev}}, {{"Y", out}}));
        prev = out;
      }
      sc.cells.push_back(make_cell("trojan_p_en", "AND2", {{"A", "$trigger"}, {"B", prev}},
                                   {{"Y", head}}));
      break;
    }
  }
  return sc;
}

InsertionResult insert_ht(const Netlist& host, const CellLibrary& lib,
                          const std::optional<HtTemplateSpec>& spec, std::mt19937_64& rng) {
  const int host_nodes = host.node_count();
  auto fits = [&](int ht_nodes) { return 20L * ht_nodes < host_nodes; };  // < 5%

  // tap candidates: driven wires that feed no PO pseudo-cell
  std::vector<Wire> wires = build_wires(host);
  std::set<std::string> po_ids(host.primary_outputs.begin(), host.primary_outputs.end());
  std::set<int> po_cells;
  for (const std::string& id : host.primary_outputs) {
    int i = host.index_of(id);
    if (i >= 0) po_cells.insert(i);
  }
  std::vector<std::string> tap_candidates, victim_candidates, po_net_candidates;
  for (const Wire& w : wires) {
    if (w.driver < 0 || is_tie_wire(w.name)) continue;
    bool feeds_po = false;
    for (const auto& [sink, pin] : w.sinks) feeds_po |= po_cells.count(sink) > 0;
    if (!feeds_po) tap_candidates.push_back(w.name);
    if (!w.sinks.empty()) victim_candidates.push_back(w.name);
    if (feeds_po) po_net_candidates.push_back(w.name);
  }

  HtTemplateSpec chosen;
  if (spec) {
    chosen = *spec;
    check_params(chosen.trigger, chosen.payload, chosen.params);
    if (!fits(trigger_size(chosen.trigger, chosen.params) +
              payload_size(chosen.payload, chosen.params)))
      fail(Errc::host_too_small, "HT would reach 5% of " + std::to_string(host_nodes) + " nodes");
  } else {
    // random template, parameters clamped so the 5% bound holds
    chosen.trigger = (rng() & 1) ? TriggerKind::Combinational : TriggerKind::Sequential;
    switch (rng() % 3) {
      case 0: chosen.payload = PayloadKind::DenialOfService; break;
      case 1: chosen.payload = PayloadKind::InformationLeakage; break;
      default: chosen.payload = PayloadKind::PowerConsuming; break;
    }
    auto sample_in = [&](int lo, int hi) {
      return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    HtParams& p = chosen.params;
    const int min_trig = trigger_size(chosen.trigger,
                                      HtParams{kMinTrigWidth, kMinCounterBits, kMinRing});
    if (chosen.payload == PayloadKind::PowerConsuming) {
      int max_ring = kMinRing;
      for (int L = kMinRing; L <= kMaxRing; L += 2)
        if (fits(min_trig + L + 1)) max_ring = L;
      p.ring_length = kMinRing + 2 * (sample_in(0, (max_ring - kMinRing) / 2));
    }
    int pay = payload_size(chosen.payload, p);
    if (chosen.trigger == TriggerKind::Combinational) {
      int kmax = kMinTrigWidth;
      for (int k = kMinTrigWidth; k <= kMaxTrigWidth; ++k)
        if (fits(k - 1 + pay) && static_cast<size_t>(k) <= tap_candidates.size()) kmax = k;
      p.trigger_width = sample_in(kMinTrigWidth, kmax);
    } else {
      int kmax = kMinCounterBits;
      for (int k = kMinCounterBits; k <= kMaxCounterBits; ++k)
        if (fits(3 * k + pay)) kmax = k;
      p.counter_bits = sample_in(kMinCounterBits, kmax);
    }
    if (!fits(trigger_size(chosen.trigger, chosen.params) + pay))
      fail(Errc::host_too_small, "host of " + std::to_string(host_nodes) + " nodes");
  }

  const int taps_needed =
      chosen.trigger == TriggerKind::Combinational ? chosen.params.trigger_width : 2;
  if (static_cast<int>(tap_candidates.size()) < taps_needed)
    fail(Errc::host_too_small, "only " + std::to_string(tap_candidates.size()) +
                                   " tap candidate wires for " + std::to_string(taps_needed) +
                                   " taps");

  Subcircuit trig = gen_trigger(chosen.trigger, chosen.params, rng);
  Subcircuit pay = gen_payload(chosen.payload, chosen.params, rng);

  // distinct random taps
  std::vector<std::string> taps = tap_candidates;
  std::shuffle(taps.begin(), taps.end(), rng);
  taps.resize(trig.taps.size());

  // victim selection
  std::string victim_in, victim_out, leak_src;
  std::vector<std::pair<int, std::string>> rerouted_sinks;  // (cell, pin)
  if (chosen.payload == PayloadKind::DenialOfService) {
    if (victim_candidates.empty()) fail(Errc::host_too_small, "no victim wire");
    victim_in = victim_candidates[rng() % victim_candidates.size()];
    victim_out = "trojan_w_victim";
    for (const Wire& w : wires)
      if (w.name == victim_in) rerouted_sinks = w.sinks;
  } else if (chosen.payload == PayloadKind::InformationLeakage) {
    if (po_net_candidates.empty()) fail(Errc::host_too_small, "no driven primary-output net");
    victim_in = po_net_candidates[rng() % po_net_candidates.size()];
    victim_out = "trojan_w_victim";
    leak_src = tap_candidates[rng() % tap_candidates.size()];
    for (const Wire& w : wires)
      if (w.name == victim_in)
        for (const auto& s : w.sinks)
          if (po_cells.count(s.first)) rerouted_sinks.push_back(s);  // only the PO reroutes
  }

  // assemble the infested netlist
  InsertionResult res;
  res.spec = chosen;
  res.netlist = host;
  res.netlist.rebuild_index();
  Netlist& out = res.netlist;

  // make generated names unique against the host
  std::unordered_set<std::string> used_names;
  for (const Cell& c : host.cells) used_names.insert(c.instance);
  std::unordered_set<std::string> used_wires;
  for (const Wire& w : wires) used_wires.insert(w.name);
  std::unordered_set<std::string> tap_set(trig.taps.begin(), trig.taps.end());
  auto generated_wires = [&](const Subcircuit& sc, std::vector<std::string>& into) {
    for (const Cell& c : sc.cells) {
      for (const PinBinding& pb : c.inputs)
        if (pb.wire[0] != '$' && !tap_set.count(pb.wire)) into.push_back(pb.wire);
      for (const PinBinding& pb : c.outputs)
        if (pb.wire[0] != '$') into.push_back(pb.wire);
    }
  };
  std::vector<std::string> gen_wires;
  generated_wires(trig, gen_wires);
  generated_wires(pay, gen_wires);
  std::string suffix;
  for (int s = 0;; ++s) {
    suffix = s == 0 ? "" : "_" + std::to_string(s);
    bool clash = false;
    for (const Cell& c : trig.cells) clash |= used_names.count(c.instance + suffix) > 0;
    for (const Cell& c : pay.cells) clash |= used_names.count(c.instance + suffix) > 0;
    for (const std::string& w : gen_wires) clash |= used_wires.count(w + suffix) > 0;
    if (!victim_out.empty()) clash |= used_wires.count(victim_out + suffix) > 0;
    if (!clash) break;
  }
  if (!victim_out.empty()) victim_out += suffix;

  std::unordered_map<std::string, std::string> wire_map;
  for (size_t i = 0; i < trig.taps.size(); ++i) wire_map[trig.taps[i]] = taps[i];
  wire_map["$trigger"] = trig.trigger_out + suffix;
  wire_map["$victim_in"] = victim_in;
  wire_map["$victim_out"] = victim_out;
  wire_map["$leak_src"] = leak_src;

  auto rename = [&](const std::string& w) -> std::string {
    auto it = wire_map.find(w);
    if (it != wire_map.end()) return it->second;
    return w + suffix;  // internal generated wire
  };

  // reroute the victim sinks to the payload output
  if (!victim_out.empty()) {
    std::set<std::pair<int, std::string>> reroute(rerouted_sinks.begin(), rerouted_sinks.end());
    for (int ci = 0; ci < out.node_count(); ++ci)
      for (PinBinding& pb : out.cells[ci].inputs)
        if (pb.wire == victim_in && reroute.count({ci, pb.pin})) pb.wire = victim_out;
  }

  std::vector<Cell> ht_cells = trig.cells;
  ht_cells.insert(ht_cells.end(), pay.cells.begin(), pay.cells.end());
  for (Cell& c : ht_cells) {
    lib.at(c.type);  // generated cells must exist in the active library
    c.instance += suffix;
    for (PinBinding& pb : c.inputs) pb.wire = rename(pb.wire);
    for (PinBinding& pb : c.outputs) pb.wire = rename(pb.wire);
    res.trojan_instances.push_back(c.instance);
  }
  res.trigger_wire = wire_map["$trigger"];

  // insert before the PO pseudo-cells to keep the PI/gates/PO layout
  int insert_at = out.node_count();
  for (int i = 0; i < out.node_count(); ++i)
    if (po_cells.count(i)) {
      insert_at = i;
      break;
    }
  out.cells.insert(out.cells.begin() + insert_at, ht_cells.begin(), ht_cells.end());
  out.labels.insert(out.labels.begin() + insert_at, ht_cells.size(), NodeLabel::Trojan);
  out.rebuild_index();
  validate(out);
  return res;
}

namespace {

nlohmann::json spec_json(const HtTemplateSpec& s) {
  return {{"trigger", trigger_kind_name(s.trigger)},
          {"payload", payload_kind_name(s.payload)},
          {"trigger_width", s.params.trigger_width},
          {"counter_bits", s.params.counter_bits},
          {"ring_length", s.params.ring_length}};
}

}  // namespace

std::string manifest_to_json(const GenManifest& m) {
  nlohmann::json j;
  j["seed"] = m.seed;
  nlohmann::json samples = nlohmann::json::array();
  for (const SampleRecord& r : m.samples) {
    nlohmann::json s = spec_json(r.spec);
    s["file"] = r.file;
    s["host"] = r.host;
    s["index"] = r.index;
    s["seed"] = r.seed;
    s["trigger_wire"] = r.trigger_wire;
    s["nodes"] = r.nodes;
    s["trojan_nodes"] = r.trojan_nodes;
    s["trojan_instances"] = r.trojan_instances;
    samples.push_back(std::move(s));
  }
  j["samples"] = std::move(samples);
  return j.dump(2) + "\n";
}

GenManifest gen_dataset(const std::vector<Netlist>& hosts, const CellLibrary& lib,
                        int samples_per_host, std::uint64_t seed, const std::string& out_dir) {
  if (hosts.empty()) fail(Errc::empty_dataset, "no host netlists");
  if (samples_per_host < 1) fail(Errc::bad_config, "samples_per_host must be >= 1");
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "samples");

  GenManifest man;
  man.seed = seed;
  for (size_t h = 0; h < hosts.size(); ++h) {
    for (int k = 0; k < samples_per_host; ++k) {
      std::uint64_t sample_seed = mix_seed(mix_seed(seed, h), static_cast<std::uint64_t>(k));
      std::mt19937_64 rng(sample_seed);
      InsertionResult ins = insert_ht(hosts[h], lib, std::nullopt, rng);
      ins.netlist.name = hosts[h].name + "_ht" + std::to_string(k);

      SampleRecord rec;
      rec.file = "samples/" + hosts[h].name + "_" + std::to_string(k) + ".json";
      rec.host = hosts[h].name;
      rec.index = k;
      rec.seed = sample_seed;
      rec.spec = ins.spec;
      rec.trigger_wire = ins.trigger_wire;
      rec.nodes = ins.netlist.node_count();
      rec.trojan_nodes = ins.netlist.trojan_count();
      rec.trojan_instances = ins.trojan_instances;

      write_graph_json_file(ins.netlist, (fs::path(out_dir) / rec.file).string());
      man.samples.push_back(std::move(rec));
    }
  }
  std::ofstream mf(fs::path(out_dir) / "manifest.json", std::ios::binary);
  if (!mf) fail(Errc::io_error, "cannot write manifest under '" + out_dir + "'");
  mf << manifest_to_json(man);
  return man;
}

}  // namespace htgen
}  // namespace nhtd
