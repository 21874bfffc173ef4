// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/netlist.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>

#include "nhtd/errors.hpp"

namespace nhtd {

int Netlist::trojan_count() const {
  int n = 0;
  for (NodeLabel l : labels)
    if (l == NodeLabel::Trojan) ++n;
  return n;
}

int Netlist::index_of(const std::string& instance) const {
  if (index_.size() != cells.size()) {
    index_.clear();
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) index_[cells[i].instance] = i;
  }
  auto it = index_.find(instance);
  return it == index_.end() ? -1 : it->second;
}

void Netlist::rebuild_index() { index_.clear(); }

std::vector<Wire> build_wires(const Netlist& nl) {
  std::vector<Wire> wires;
  std::unordered_map<std::string, int> by_name;
  auto wire_at = [&](const std::string& name) -> Wire& {
    auto it = by_name.find(name);
    if (it != by_name.end()) return wires[it->second];
    by_name.emplace(name, static_cast<int>(wires.size()));
    wires.push_back(Wire{name, -1, "", {}});
    return wires.back();
  };
  for (int ci = 0; ci < static_cast<int>(nl.cells.size()); ++ci) {
    const Cell& c = nl.cells[ci];
    for (const PinBinding& pb : c.outputs) {
      Wire& w = wire_at(pb.wire);
      if (w.driver >= 0)
        fail(Errc::multiple_drivers, pb.wire + " (driven by '" + nl.cells[w.driver].instance +
                                         "' and '" + c.instance + "')");
      w.driver = ci;
      w.driver_pin = pb.pin;
    }
    for (const PinBinding& pb : c.inputs) wire_at(pb.wire).sinks.emplace_back(ci, pb.pin);
  }
  return wires;
}

namespace {

std::set<std::string> port_ids(const Netlist& nl) {
  std::set<std::string> ids(nl.primary_inputs.begin(), nl.primary_inputs.end());
  ids.insert(nl.primary_outputs.begin(), nl.primary_outputs.end());
  return ids;
}

}  // namespace

void validate(const Netlist& nl) {
  if (nl.labels.size() != nl.cells.size())
    fail(Errc::schema_error, "label vector does not cover every cell");
  std::set<std::string> ids;
  for (const Cell& c : nl.cells)
    if (!ids.insert(c.instance).second) fail(Errc::duplicate_id, c.instance);
  build_wires(nl);  // throws on multiple drivers
  std::set<std::string> ports = port_ids(nl);
  for (int i = 0; i < static_cast<int>(nl.cells.size()); ++i) {
    if (ports.count(nl.cells[i].instance) && nl.labels[i] == NodeLabel::Trojan)
      fail(Errc::schema_error, "Trojan label on port pseudo-cell '" + nl.cells[i].instance + "'");
  }
}

LabelSpec LabelSpec::list_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open label list '" + path + "'");
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    // trim whitespace; '#' starts a comment
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(b, e - b + 1));
  }
  return LabelSpec::list(std::move(ids));
}

Netlist label_nodes(const Netlist& nl, const LabelSpec& spec) {
  Netlist out = nl;
  out.labels.assign(out.cells.size(), NodeLabel::Normal);
  out.rebuild_index();
  std::set<std::string> ports = port_ids(out);
  auto is_port = [&](int i) { return ports.count(out.cells[i].instance) > 0; };
  if (spec.kind == LabelSpec::Kind::Regex) {
    std::string pat = spec.pattern;
    auto flags = std::regex::ECMAScript;
    if (pat.rfind("(?i)", 0) == 0) {
      pat = pat.substr(4);
      flags |= std::regex::icase;
    }
    std::regex re;
    try {
      re = std::regex(pat, flags);
    } catch (const std::regex_error& e) {
      fail(Errc::bad_config, std::string("label regex: ") + e.what());
    }
    for (int i = 0; i < out.node_count(); ++i)
      if (!is_port(i) && std::regex_search(out.cells[i].instance, re))
        out.labels[i] = NodeLabel::Trojan;
  } else {
    for (const std::string& id : spec.instances) {
      int i = out.index_of(id);
      if (i < 0) fail(Errc::unknown_instance, id);
      if (!is_port(i)) out.labels[i] = NodeLabel::Trojan;
    }
  }
  return out;
}

bool graph_equal(const Netlist& a, const Netlist& b) {
  if (a.name != b.name || a.cells.size() != b.cells.size()) return false;
  for (size_t i = 0; i < a.cells.size(); ++i) {
    if (a.cells[i].instance != b.cells[i].instance || a.cells[i].type != b.cells[i].type ||
        a.labels[i] != b.labels[i])
      return false;
  }
  auto edge_multiset = [](const Netlist& nl) {
    std::vector<std::pair<int, int>> es;
    for (const Wire& w : build_wires(nl)) {
      if (w.driver < 0) continue;
      for (const auto& [sink, pin] : w.sinks) es.emplace_back(w.driver, sink);
    }
    std::sort(es.begin(), es.end());
    return es;
  };
  if (edge_multiset(a) != edge_multiset(b)) return false;
  return a.primary_inputs == b.primary_inputs && a.primary_outputs == b.primary_outputs;
}

}  // namespace nhtd
