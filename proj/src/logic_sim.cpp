// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/logic_sim.hpp"

#include <random>
#include <unordered_map>

#include "nhtd/errors.hpp"

namespace nhtd {
namespace sim {

namespace {

bool eval_named(const std::string& type, const std::vector<bool>& in, bool* out) {
  auto a = [&](size_t i) { return i < in.size() ? in[i] : false; };
  if (type == "AOI21") {
    *out = !((a(0) && a(1)) || a(2));
    return true;
  }
  if (type == "AOI22") {
    *out = !((a(0) && a(1)) || (a(2) && a(3)));
    return true;
  }
  if (type == "AOI211") {
    *out = !((a(0) && a(1)) || a(2) || a(3));
    return true;
  }
  if (type == "AOI221") {
    *out = !((a(0) && a(1)) || (a(2) && a(3)) || a(4));
    return true;
  }
  if (type == "OAI21") {
    *out = !((a(0) || a(1)) && a(2));
    return true;
  }
  if (type == "OAI22") {
    *out = !((a(0) || a(1)) && (a(2) || a(3)));
    return true;
  }
  if (type == "OAI211") {
    *out = !((a(0) || a(1)) && a(2) && a(3));
    return true;
  }
  if (type == "OAI221") {
    *out = !((a(0) || a(1)) && (a(2) || a(3)) && a(4));
    return true;
  }
  if (type == "AO21") {
    *out = (a(0) && a(1)) || a(2);
    return true;
  }
  if (type == "MUX4") {
    // pins (S0, S1, A, B, C, D)
    int sel = (a(0) ? 1 : 0) | (a(1) ? 2 : 0);
    *out = a(2 + sel);
    return true;
  }
  return false;
}

bool eval_kind(GateKind kind, const std::vector<bool>& in) {
  switch (kind) {
    case GateKind::And: {
      for (bool b : in)
        if (!b) return false;
      return true;
    }
    case GateKind::Nand: {
      for (bool b : in)
        if (!b) return true;
      return false;
    }
    case GateKind::Or: {
      for (bool b : in)
        if (b) return true;
      return false;
    }
    case GateKind::Nor: {
      for (bool b : in)
        if (b) return false;
      return true;
    }
    case GateKind::Xor: {
      bool r = false;
      for (bool b : in) r = r != b;
      return r;
    }
    case GateKind::Xnor: {
      bool r = false;
      for (bool b : in) r = r != b;
      return !r;
    }
    case GateKind::Inv:
      return in.empty() ? true : !in[0];
    case GateKind::Buf:
    case GateKind::Po:
      return in.empty() ? false : in[0];
    case GateKind::Mux: {
      bool s = !in.empty() && in[0];
      bool va = in.size() > 1 && in[1];
      bool vb = in.size() > 2 && in[2];
      return s ? vb : va;
    }
    default:
      return false;
  }
}

}  // namespace

Result evaluate(const Netlist& nl, const CellLibrary& lib, const std::vector<bool>& pi_values,
                const Options& opt) {
  if (pi_values.size() != nl.primary_inputs.size())
    fail(Errc::shape_mismatch, "PI vector size " + std::to_string(pi_values.size()) + " vs " +
                                   std::to_string(nl.primary_inputs.size()) + " inputs");
  std::unordered_map<std::string, bool> w;
  auto rd = [&](const std::string& name) {
    if (name == "1'b1") return true;
    if (name == "1'b0") return false;
    auto f = opt.force.find(name);
    if (f != opt.force.end()) return f->second;
    auto it = w.find(name);
    return it != w.end() && it->second;
  };
  auto wr = [&](const std::string& name, bool v) {
    if (opt.force.count(name)) return;  // pinned
    w[name] = v;
  };

  // HA/FA carry two outputs and get dedicated handling.
  auto eval_cell = [&](const Cell& c, const CellType* ct) {
    auto pin_in = [&](size_t k) {
      if (ct && k < ct->inputs.size()) {
        for (const PinBinding& pb : c.inputs)
          if (pb.pin == ct->inputs[k]) return rd(pb.wire);
        // fall through to positional when names do not match
      }
      return k < c.inputs.size() ? rd(c.inputs[k].wire) : false;
    };
    std::vector<bool> in;
    size_t nin = ct && !ct->inputs.empty() ? ct->inputs.size() : c.inputs.size();
    in.reserve(nin);
    for (size_t k = 0; k < nin; ++k) in.push_back(pin_in(k));

    if (c.type == "HA" || c.type == "FA") {
      bool s = eval_kind(GateKind::Xor, in);
      int ones = 0;
      for (bool b : in) ones += b ? 1 : 0;
      bool co = ones >= 2;
      for (const PinBinding& pb : c.outputs) wr(pb.wire, pb.pin == "CO" ? co : s);
      return;
    }
    GateKind kind = ct ? ct->kind : GateKind::Other;
    bool v = false;
    if (kind == GateKind::Dff || kind == GateKind::Latch) {
      v = opt.dff_state;
    } else if (kind == GateKind::Other) {
      if (!eval_named(c.type, in, &v)) v = false;
    } else if (kind == GateKind::Pi) {
      return;  // handled below
    } else {
      v = eval_kind(kind, in);
    }
    for (const PinBinding& pb : c.outputs) wr(pb.wire, v);
  };

  for (size_t i = 0; i < nl.primary_inputs.size(); ++i) {
    // PI pseudo-cells drive their port wire; find the actual wire binding
    int ci = nl.index_of(nl.primary_inputs[i]);
    if (ci < 0) fail(Errc::unknown_instance, nl.primary_inputs[i]);
    for (const PinBinding& pb : nl.cells[ci].outputs) wr(pb.wire, pi_values[i]);
  }

  Result res;
  res.settled = false;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    bool changed = false;
    for (const Cell& c : nl.cells) {
      const CellType* ct = lib.find(c.type);
      if (ct && ct->kind == GateKind::Pi) continue;
      std::vector<std::pair<std::string, bool>> before;
      for (const PinBinding& pb : c.outputs) before.emplace_back(pb.wire, rd(pb.wire));
      eval_cell(c, ct);
      for (const auto& [wire, old] : before)
        if (rd(wire) != old) changed = true;
    }
    if (!changed) {
      res.settled = true;
      break;
    }
  }
  for (const auto& [name, v] : w) res.wires[name] = v;
  return res;
}

EquivalenceCheck compare_outputs(const Netlist& a, const Netlist& b, const CellLibrary& lib,
                                 const Options& opt_a, const Options& opt_b,
                                 int exhaustive_limit, int random_vectors, std::uint64_t seed) {
  EquivalenceCheck ec;
  if (a.primary_inputs != b.primary_inputs)
    fail(Errc::shape_mismatch, "netlists expose different primary inputs");
  const size_t npi = a.primary_inputs.size();

  // Compare on the values seen by the PO pseudo-cells of `a`.
  struct OutProbe {
    std::string po, wire_a, wire_b;
  };
  std::vector<OutProbe> probes;
  for (const std::string& po : a.primary_outputs) {
    int ia = a.index_of(po), ib = b.index_of(po);
    if (ia < 0 || ib < 0) fail(Errc::unknown_instance, po);
    if (a.cells[ia].inputs.empty() || b.cells[ib].inputs.empty()) continue;
    probes.push_back({po, a.cells[ia].inputs[0].wire, b.cells[ib].inputs[0].wire});
  }

  auto run_vector = [&](const std::vector<bool>& v) {
    Result ra = evaluate(a, lib, v, opt_a);
    Result rb = evaluate(b, lib, v, opt_b);
    for (const OutProbe& p : probes) {
      bool va = ra.wires.count(p.wire_a) && ra.wires.at(p.wire_a);
      bool vb = rb.wires.count(p.wire_b) && rb.wires.at(p.wire_b);
      if (va != vb) {
        std::string bits;
        for (bool x : v) bits += x ? '1' : '0';
        ec.equivalent = false;
        ec.mismatch = "output '" + p.po + "' differs on input " + bits;
        return false;
      }
    }
    return true;
  };

  if (npi <= static_cast<size_t>(exhaustive_limit)) {
    const long total = 1L << npi;
    std::vector<bool> v(npi);
    for (long x = 0; x < total; ++x) {
      for (size_t i = 0; i < npi; ++i) v[i] = (x >> i) & 1;
      ++ec.vectors;
      if (!run_vector(v)) return ec;
    }
  } else {
    std::mt19937_64 rng(seed);
    std::vector<bool> v(npi);
    for (int x = 0; x < random_vectors; ++x) {
      for (size_t i = 0; i < npi; ++i) v[i] = rng() & 1;
      ++ec.vectors;
      if (!run_vector(v)) return ec;
    }
  }
  return ec;
}

}  // namespace sim
}  // namespace nhtd
