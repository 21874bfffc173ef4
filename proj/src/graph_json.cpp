// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/graph_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nhtd/errors.hpp"
#include "nhtd/verilog.hpp"

namespace nhtd {

using nlohmann::json;

std::string write_graph_json(const Netlist& nl) {
  json j;
  j["name"] = nl.name;
  json nodes = json::array();
  for (int i = 0; i < nl.node_count(); ++i) {
    nodes.push_back({{"id", nl.cells[i].instance},
                     {"type", nl.cells[i].type},
                     {"label", nl.labels[i] == NodeLabel::Trojan ? "trojan" : "normal"}});
  }
  j["nodes"] = std::move(nodes);

  std::vector<std::pair<int, int>> edges;
  for (const Wire& w : build_wires(nl)) {
    if (w.driver < 0) continue;
    for (const auto& [sink, pin] : w.sinks) edges.emplace_back(w.driver, sink);
  }
  std::sort(edges.begin(), edges.end());
  json je = json::array();
  for (const auto& [u, v] : edges)
    je.push_back({{"from", nl.cells[u].instance}, {"to", nl.cells[v].instance}});
  j["edges"] = std::move(je);

  j["primary_inputs"] = nl.primary_inputs;
  j["primary_outputs"] = nl.primary_outputs;
  return j.dump(2) + "\n";
}

Netlist parse_graph_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::schema_error, std::string("$: ") + e.what());
  }
  auto require = [&](const char* key, json::value_t type) -> const json& {
    if (!j.contains(key)) fail(Errc::schema_error, std::string("$.") + key + ": missing");
    const json& v = j.at(key);
    if (v.type() != type) fail(Errc::schema_error, std::string("$.") + key + ": wrong type");
    return v;
  };
  Netlist nl;
  nl.name = require("name", json::value_t::string).get<std::string>();

  const json& nodes = require("nodes", json::value_t::array);
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const json& n = nodes[i];
    std::string path = "$.nodes[" + std::to_string(i) + "]";
    if (!n.is_object() || !n.contains("id") || !n.contains("type") || !n.contains("label"))
      fail(Errc::schema_error, path + ": need id/type/label");
    Cell c;
    c.instance = n.at("id").get<std::string>();
    c.type = n.at("type").get<std::string>();
    std::string label = n.at("label").get<std::string>();
    if (label != "normal" && label != "trojan")
      fail(Errc::schema_error, path + ".label: '" + label + "'");
    if (!index.emplace(c.instance, static_cast<int>(i)).second)
      fail(Errc::duplicate_id, c.instance);
    nl.cells.push_back(std::move(c));
    nl.labels.push_back(label == "trojan" ? NodeLabel::Trojan : NodeLabel::Normal);
  }

  auto node_of = [&](const json& v, const std::string& path) {
    if (!v.is_string()) fail(Errc::schema_error, path + ": node id must be a string");
    auto it = index.find(v.get<std::string>());
    if (it == index.end())
      fail(Errc::schema_error, path + ": unknown node '" + v.get<std::string>() + "'");
    return it->second;
  };

  const json& edges = require("edges", json::value_t::array);
  std::vector<std::pair<int, int>> es;
  for (size_t i = 0; i < edges.size(); ++i) {
    const json& e = edges[i];
    std::string path = "$.edges[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("from") || !e.contains("to"))
      fail(Errc::schema_error, path + ": need from/to");
    es.emplace_back(node_of(e.at("from"), path + ".from"), node_of(e.at("to"), path + ".to"));
  }
  std::sort(es.begin(), es.end());

  // Re-synthesize wires: one net per driving node, sinks bound in canonical
  // edge order with pin names taken from nothing the format carries, so
  // generic in<k>/out names are used.
  std::vector<int> in_count(nl.cells.size(), 0);
  for (size_t k = 0; k < es.size();) {
    size_t k2 = k;
    int u = es[k].first;
    std::string wire = nl.cells[u].instance + ":o";
    nl.cells[u].outputs.push_back({"out", wire});
    while (k2 < es.size() && es[k2].first == u) {
      int v = es[k2].second;
      nl.cells[v].inputs.push_back({"in" + std::to_string(in_count[v]++), wire});
      ++k2;
    }
    k = k2;
  }

  for (const json& v : require("primary_inputs", json::value_t::array)) {
    int i = node_of(v, "$.primary_inputs");
    nl.primary_inputs.push_back(nl.cells[i].instance);
  }
  for (const json& v : require("primary_outputs", json::value_t::array)) {
    int i = node_of(v, "$.primary_outputs");
    nl.primary_outputs.push_back(nl.cells[i].instance);
  }
  validate(nl);
  return nl;
}

Netlist read_graph_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open graph '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph_json(ss.str());
}

void write_graph_json_file(const Netlist& nl, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write '" + path + "'");
  out << write_graph_json(nl);
}

Netlist load_netlist_auto(const std::string& path, const CellLibrary& lib) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".v" || ext == ".vg" || ext == ".verilog") return parse_verilog_file(path, lib);
  return read_graph_json_file(path);
}

}  // namespace nhtd
