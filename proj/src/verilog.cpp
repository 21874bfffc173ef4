// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/verilog.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "nhtd/errors.hpp"

namespace nhtd {
namespace {

struct Token {
  enum class Kind { Ident, Punct, Number, Const, End } kind;
  std::string text;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws_and_comments();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.kind = Token::Kind::End;
      return t;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\') {
      // identifiers; escaped identifiers (\foo ) run to the next whitespace
      if (c == '\\') {
        advance();
        while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_]))) {
          t.text += src_[pos_];
          advance();
        }
      } else {
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                src_[pos_] == '$')) {
          t.text += src_[pos_];
          advance();
        }
      }
      t.kind = Token::Kind::Ident;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '\'')) {
        advance();
      }
      t.text = src_.substr(start, pos_ - start);
      t.kind = (t.text == "1'b0" || t.text == "1'b1") ? Token::Kind::Const : Token::Kind::Number;
      return t;
    }
    t.kind = Token::Kind::Punct;
    t.text = std::string(1, c);
    advance();
    return t;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws_and_comments() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
      if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '*') {
        advance();
        advance();
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 < src_.size()) {
          advance();
          advance();
        } else {
          pos_ = src_.size();
        }
        continue;
      }
      break;
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

[[noreturn]] void syntax_error(const Token& t, const std::string& what) {
  fail(Errc::syntax_error, "line " + std::to_string(t.line) + ", col " + std::to_string(t.col) +
                               ": " + what +
                               (t.text.empty() ? "" : " (near '" + t.text + "')"));
}

class Parser {
 public:
  Parser(const std::string& src, const CellLibrary& lib) : lex_(src), lib_(lib) { bump(); }

  Netlist parse() {
    expect_ident("module");
    Token name = expect(Token::Kind::Ident, "module name");
    module_name_ = name.text;
    expect_punct("(");
    if (!at_punct(")")) {
      for (;;) {
        expect(Token::Kind::Ident, "port name");  // directions come from the body
        if (at_punct(",")) {
          bump();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_punct(";");

    while (!at_ident("endmodule")) {
      if (cur_.kind == Token::Kind::End) syntax_error(cur_, "missing endmodule");
      if (at_ident("input")) {
        bump();
        declare(inputs_);
      } else if (at_ident("output")) {
        bump();
        declare(outputs_);
      } else if (at_ident("wire")) {
        bump();
        declare(wires_);
      } else if (at_ident("assign")) {
        bump();
        parse_assign();
      } else if (cur_.kind == Token::Kind::Ident) {
        parse_instance();
      } else {
        syntax_error(cur_, "expected declaration or instantiation");
      }
    }
    return build();
  }

 private:
  struct Instance {
    std::string type, name;
    std::vector<std::pair<std::string, std::string>> conns;  // pin -> wire ("" pin = positional)
    bool positional = false;
    Token at;
  };

  void bump() { cur_ = lex_.next(); }

  bool at_ident(const char* s) const {
    return cur_.kind == Token::Kind::Ident && cur_.text == s;
  }
  bool at_punct(const char* s) const {
    return cur_.kind == Token::Kind::Punct && cur_.text == s;
  }

  Token expect(Token::Kind k, const std::string& what) {
    if (cur_.kind != k) syntax_error(cur_, "expected " + what);
    Token t = cur_;
    bump();
    return t;
  }
  void expect_ident(const char* s) {
    if (!at_ident(s)) syntax_error(cur_, std::string("expected '") + s + "'");
    bump();
  }
  void expect_punct(const char* s) {
    if (!at_punct(s)) syntax_error(cur_, std::string("expected '") + s + "'");
    bump();
  }

  int expect_number() {
    Token t = expect(Token::Kind::Number, "number");
    return std::stoi(t.text);
  }

  // input/output/wire declaration with optional [h:l] range
  void declare(std::vector<std::string>& into) {
    std::optional<std::pair<int, int>> range;
    if (at_punct("[")) {
      bump();
      int hi = expect_number();
      expect_punct(":");
      int lo = expect_number();
      expect_punct("]");
      if (lo > hi) std::swap(lo, hi);
      range = {hi, lo};
    }
    for (;;) {
      Token t = expect(Token::Kind::Ident, "net name");
      if (range) {
        for (int b = range->second; b <= range->first; ++b)
          into.push_back(t.text + "[" + std::to_string(b) + "]");
      } else {
        into.push_back(t.text);
      }
      if (at_punct(",")) {
        bump();
        continue;
      }
      break;
    }
    expect_punct(";");
  }

  // a wire reference: ident, ident[bit], or a 1'b0/1'b1 tie
  std::string parse_ref() {
    if (cur_.kind == Token::Kind::Const) {
      std::string w = cur_.text;
      bump();
      return w;
    }
    Token t = expect(Token::Kind::Ident, "wire reference");
    std::string w = t.text;
    if (at_punct("[")) {
      bump();
      int bit = expect_number();
      expect_punct("]");
      w += "[" + std::to_string(bit) + "]";
    }
    return w;
  }

  void parse_assign() {
    Token at = cur_;
    std::string lhs = parse_ref();
    expect_punct("=");
    std::string rhs = parse_ref();
    expect_punct(";");
    if (is_tie_wire(lhs)) syntax_error(at, "cannot assign to a constant");
    aliases_.emplace_back(lhs, rhs);
  }

  void parse_instance() {
    Instance inst;
    inst.at = cur_;
    inst.type = expect(Token::Kind::Ident, "cell type").text;
    inst.name = expect(Token::Kind::Ident, "instance name").text;
    expect_punct("(");
    if (!at_punct(")")) {
      if (at_punct(".")) {
        for (;;) {
          expect_punct(".");
          std::string pin = expect(Token::Kind::Ident, "pin name").text;
          expect_punct("(");
          std::string wire;
          if (!at_punct(")")) wire = parse_ref();  // `.PIN()` = unconnected
          expect_punct(")");
          if (!wire.empty()) inst.conns.emplace_back(pin, wire);
          if (at_punct(",")) {
            bump();
            continue;
          }
          break;
        }
      } else {
        inst.positional = true;
        for (;;) {
          inst.conns.emplace_back("", parse_ref());
          if (at_punct(",")) {
            bump();
            continue;
          }
          break;
        }
      }
    }
    expect_punct(")");
    expect_punct(";");
    instances_.push_back(std::move(inst));
  }

  // Alias resolution: union-find over wire names, canonical name = the
  // representative that was declared first.
  std::string resolve(std::unordered_map<std::string, std::string>& parent,
                      const std::string& w) const {
    auto it = parent.find(w);
    if (it == parent.end() || it->second == w) return w;
    std::string root = resolve(parent, it->second);
    parent[w] = root;
    return root;
  }

  Netlist build() {
    Netlist nl;
    nl.name = module_name_;

    std::unordered_set<std::string> declared;
    std::unordered_map<std::string, int> decl_order;
    int order = 0;
    auto declare_all = [&](const std::vector<std::string>& ws) {
      for (const std::string& w : ws) {
        declared.insert(w);
        if (!decl_order.count(w)) decl_order[w] = order++;
      }
    };
    declare_all(inputs_);
    declare_all(outputs_);
    declare_all(wires_);

    auto check_declared = [&](const std::string& w, const Token& at) {
      if (!declared.count(w) && !is_tie_wire(w)) {
        (void)at;
        fail(Errc::unbound_wire, w);
      }
    };

    std::unordered_map<std::string, std::string> parent;
    for (const auto& [a, b] : aliases_) {
      check_declared(a, Token{});
      if (!is_tie_wire(b)) check_declared(b, Token{});
      std::string ra = resolve(parent, a), rb = resolve(parent, b);
      if (ra == rb) continue;
      // keep the earlier-declared name as representative
      int oa = decl_order.count(ra) ? decl_order[ra] : order;
      int ob = decl_order.count(rb) ? decl_order[rb] : order;
      if (oa <= ob)
        parent[rb] = ra;
      else
        parent[ra] = rb;
    }
    auto canon = [&](const std::string& w) { return resolve(parent, w); };

    // PI pseudo-cells first, in declaration order
    for (const std::string& w : inputs_) {
      Cell c;
      c.instance = w;
      c.type = lib_.pi_name();
      c.outputs.push_back({"Y", canon(w)});
      nl.cells.push_back(std::move(c));
      nl.primary_inputs.push_back(w);
    }

    for (const Instance& inst : instances_) {
      const CellType* ct = lib_.find(inst.type);
      if (!ct) fail(Errc::unknown_cell, inst.type);
      Cell c;
      c.instance = inst.name;
      c.type = inst.type;
      std::vector<std::pair<std::string, std::string>> bound;
      if (inst.positional) {
        std::vector<std::string> pin_order = ct->inputs;
        pin_order.insert(pin_order.end(), ct->outputs.begin(), ct->outputs.end());
        if (inst.conns.size() > pin_order.size())
          syntax_error(inst.at, "too many positional connections for " + inst.type);
        for (size_t i = 0; i < inst.conns.size(); ++i)
          bound.emplace_back(pin_order[i], inst.conns[i].second);
      } else {
        for (const auto& [pin, wire] : inst.conns) bound.emplace_back(pin, wire);
      }
      // bucket bindings into inputs/outputs following the library pin lists
      for (const std::string& pin : ct->inputs) {
        for (const auto& [p, w] : bound)
          if (p == pin) {
            check_declared(w, inst.at);
            c.inputs.push_back({pin, canon(w)});
          }
      }
      for (const std::string& pin : ct->outputs) {
        for (const auto& [p, w] : bound)
          if (p == pin) {
            check_declared(w, inst.at);
            if (is_tie_wire(w)) syntax_error(inst.at, "constant on output pin " + pin);
            c.outputs.push_back({pin, canon(w)});
          }
      }
      if (bound.size() != c.inputs.size() + c.outputs.size()) {
        for (const auto& [p, w] : bound) {
          bool known = false;
          for (const std::string& pin : ct->inputs) known |= (pin == p);
          for (const std::string& pin : ct->outputs) known |= (pin == p);
          if (!known) syntax_error(inst.at, "unknown pin '" + p + "' on " + inst.type);
        }
      }
      nl.cells.push_back(std::move(c));
    }

    for (const std::string& w : outputs_) {
      Cell c;
      c.instance = w;
      c.type = lib_.po_name();
      c.inputs.push_back({"A", canon(w)});
      nl.cells.push_back(std::move(c));
      nl.primary_outputs.push_back(w);
    }

    nl.labels.assign(nl.cells.size(), NodeLabel::Normal);
    validate(nl);
    return nl;
  }

  Lexer lex_;
  const CellLibrary& lib_;
  Token cur_;
  std::string module_name_;
  std::vector<std::string> inputs_, outputs_, wires_;
  std::vector<std::pair<std::string, std::string>> aliases_;
  std::vector<Instance> instances_;
};

}  // namespace

Netlist parse_verilog(const std::string& source, const CellLibrary& lib) {
  Parser p(source, lib);
  return p.parse();
}

Netlist parse_verilog_file(const std::string& path, const CellLibrary& lib) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open netlist '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_verilog(ss.str(), lib);
}

}  // namespace nhtd
