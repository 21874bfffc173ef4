// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/cell_library.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nhtd/errors.hpp"

namespace nhtd {

const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Nand: return "NAND";
    case GateKind::Nor: return "NOR";
    case GateKind::Xor: return "XOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Inv: return "INV";
    case GateKind::Buf: return "BUF";
    case GateKind::Mux: return "MUX";
    case GateKind::Dff: return "DFF";
    case GateKind::Latch: return "LATCH";
    case GateKind::Pi: return "PI";
    case GateKind::Po: return "PO";
    case GateKind::Other: return "OTHER";
  }
  return "OTHER";
}

GateKind gate_kind_from_name(const std::string& name) {
  static const std::unordered_map<std::string, GateKind> table = {
      {"AND", GateKind::And},   {"OR", GateKind::Or},     {"NAND", GateKind::Nand},
      {"NOR", GateKind::Nor},   {"XOR", GateKind::Xor},   {"XNOR", GateKind::Xnor},
      {"INV", GateKind::Inv},   {"BUF", GateKind::Buf},   {"MUX", GateKind::Mux},
      {"DFF", GateKind::Dff},   {"LATCH", GateKind::Latch}, {"PI", GateKind::Pi},
      {"PO", GateKind::Po},     {"OTHER", GateKind::Other},
  };
  auto it = table.find(name);
  if (it == table.end()) fail(Errc::schema_error, "unknown gate kind '" + name + "'");
  return it->second;
}

namespace {

std::vector<std::string> pins(std::initializer_list<const char*> names) {
  return std::vector<std::string>(names.begin(), names.end());
}

}  // namespace

CellLibrary CellLibrary::standard() {
  CellLibrary lib;
  int i = 0;
  auto add = [&](const char* name, std::vector<std::string> in, std::vector<std::string> out,
                 GateKind kind) {
    lib.insert(CellType{name, i++, std::move(in), std::move(out), kind});
  };
  add("INV", pins({"A"}), pins({"Y"}), GateKind::Inv);
  add("BUF", pins({"A"}), pins({"Y"}), GateKind::Buf);
  add("AND2", pins({"A", "B"}), pins({"Y"}), GateKind::And);
  add("AND3", pins({"A", "B", "C"}), pins({"Y"}), GateKind::And);
  add("AND4", pins({"A", "B", "C", "D"}), pins({"Y"}), GateKind::And);
  add("NAND2", pins({"A", "B"}), pins({"Y"}), GateKind::Nand);
  add("NAND3", pins({"A", "B", "C"}), pins({"Y"}), GateKind::Nand);
  add("NAND4", pins({"A", "B", "C", "D"}), pins({"Y"}), GateKind::Nand);
  add("OR2", pins({"A", "B"}), pins({"Y"}), GateKind::Or);
  add("OR3", pins({"A", "B", "C"}), pins({"Y"}), GateKind::Or);
  add("OR4", pins({"A", "B", "C", "D"}), pins({"Y"}), GateKind::Or);
  add("NOR2", pins({"A", "B"}), pins({"Y"}), GateKind::Nor);
  add("NOR3", pins({"A", "B", "C"}), pins({"Y"}), GateKind::Nor);
  add("NOR4", pins({"A", "B", "C", "D"}), pins({"Y"}), GateKind::Nor);
  add("XOR2", pins({"A", "B"}), pins({"Y"}), GateKind::Xor);
  add("XOR3", pins({"A", "B", "C"}), pins({"Y"}), GateKind::Xor);
  add("XNOR2", pins({"A", "B"}), pins({"Y"}), GateKind::Xnor);
  add("XNOR3", pins({"A", "B", "C"}), pins({"Y"}), GateKind::Xnor);
  add("AOI21", pins({"A1", "A2", "B"}), pins({"Y"}), GateKind::Other);
  add("AOI22", pins({"A1", "A2", "B1", "B2"}), pins({"Y"}), GateKind::Other);
  add("AOI211", pins({"A1", "A2", "B", "C"}), pins({"Y"}), GateKind::Other);
  add("AOI221", pins({"A1", "A2", "B1", "B2", "C"}), pins({"Y"}), GateKind::Other);
  add("OAI21", pins({"A1", "A2", "B"}), pins({"Y"}), GateKind::Other);
  add("OAI22", pins({"A1", "A2", "B1", "B2"}), pins({"Y"}), GateKind::Other);
  add("OAI211", pins({"A1", "A2", "B", "C"}), pins({"Y"}), GateKind::Other);
  add("OAI221", pins({"A1", "A2", "B1", "B2", "C"}), pins({"Y"}), GateKind::Other);
  add("MUX2", pins({"S", "A", "B"}), pins({"Y"}), GateKind::Mux);
  add("MUX4", pins({"S0", "S1", "A", "B", "C", "D"}), pins({"Y"}), GateKind::Other);
  add("DFF", pins({"D", "CK"}), pins({"Q"}), GateKind::Dff);
  add("DFFR", pins({"D", "CK", "RN"}), pins({"Q"}), GateKind::Dff);
  add("DFFS", pins({"D", "CK", "SN"}), pins({"Q"}), GateKind::Dff);
  add("DFFRS", pins({"D", "CK", "RN", "SN"}), pins({"Q"}), GateKind::Dff);
  add("LATCH", pins({"D", "G"}), pins({"Q"}), GateKind::Latch);
  add("LATCHR", pins({"D", "G", "RN"}), pins({"Q"}), GateKind::Latch);
  add("HA", pins({"A", "B"}), pins({"S", "CO"}), GateKind::Other);
  add("FA", pins({"A", "B", "CI"}), pins({"S", "CO"}), GateKind::Other);
  add("AO21", pins({"A1", "A2", "B"}), pins({"Y"}), GateKind::Other);
  add("OTHER", pins({"A", "B", "C", "D"}), pins({"Y"}), GateKind::Other);
  add("PI", {}, pins({"Y"}), GateKind::Pi);
  add("PO", pins({"A"}), {}, GateKind::Po);
  lib.validate();
  return lib;
}

CellLibrary CellLibrary::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::schema_error, std::string("cell library: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::schema_error, "cell library: top level must be an object");
  CellLibrary lib;
  // Collect first, then insert by type_index so `order_` is well defined.
  std::vector<CellType> cts;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const nlohmann::json& e = it.value();
    if (!e.is_object() || !e.contains("type_index") || !e.contains("kind"))
      fail(Errc::schema_error, "cell library entry '" + it.key() + "' malformed");
    CellType ct;
    ct.name = it.key();
    ct.type_index = e.at("type_index").get<int>();
    if (e.contains("inputs")) ct.inputs = e.at("inputs").get<std::vector<std::string>>();
    if (e.contains("outputs")) ct.outputs = e.at("outputs").get<std::vector<std::string>>();
    ct.kind = gate_kind_from_name(e.at("kind").get<std::string>());
    cts.push_back(std::move(ct));
  }
  std::sort(cts.begin(), cts.end(),
            [](const CellType& a, const CellType& b) { return a.type_index < b.type_index; });
  for (auto& ct : cts) lib.insert(std::move(ct));
  lib.validate();
  return lib;
}

CellLibrary CellLibrary::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open cell library '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

const CellType* CellLibrary::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

const CellType& CellLibrary::at(const std::string& name) const {
  const CellType* ct = find(name);
  if (!ct) fail(Errc::unknown_cell, name);
  return *ct;
}

void CellLibrary::insert(CellType ct) {
  if (entries_.count(ct.name)) fail(Errc::schema_error, "duplicate cell name '" + ct.name + "'");
  if (ct.kind == GateKind::Pi) pi_name_ = ct.name;
  if (ct.kind == GateKind::Po) po_name_ = ct.name;
  order_.push_back(ct.name);
  entries_.emplace(ct.name, std::move(ct));
}

void CellLibrary::validate() const {
  std::vector<bool> seen(entries_.size(), false);
  int pi = 0, po = 0;
  for (const auto& [name, ct] : entries_) {
    if (ct.type_index < 0 || ct.type_index >= static_cast<int>(entries_.size()) ||
        seen[ct.type_index])
      fail(Errc::schema_error, "type_index of '" + name + "' out of range or duplicated");
    seen[ct.type_index] = true;
    if (ct.kind == GateKind::Pi) ++pi;
    if (ct.kind == GateKind::Po) ++po;
  }
  if (pi != 1 || po != 1)
    fail(Errc::schema_error, "library must contain exactly one PI and one PO entry");
}

}  // namespace nhtd
