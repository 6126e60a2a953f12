// Copyright 2026 The QRep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qrep/circuit.hpp"
#include "qrep/errors.hpp"
#include "qrep/gate.hpp"

namespace qrep {
namespace qasm_detail {

enum class Tok { Ident, Number, String, Symbol, Arrow, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.type = Tok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.type = Tok::Number;
        lex_number(t.text);
      } else if (c == '"') {
        t.type = Tok::String;
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
          t.text += advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != '"') {
          throw SyntaxError(t.line, t.column, "unterminated string literal");
        }
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        t.type = Tok::Arrow;
        t.text = "->";
        advance();
        advance();
      } else if (c == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
        t.type = Tok::Symbol;
        t.text = "==";
        advance();
        advance();
      } else if (std::string_view(";,[](){}+-*/^").find(c) !=
                 std::string_view::npos) {
        t.type = Tok::Symbol;
        t.text = std::string(1, advance());
      } else {
        throw SyntaxError(
            t.line, t.column, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void lex_number(std::string& text) {
    auto digits = [&] {
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        text += advance();
      }
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      text += advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      text += advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        text += advance();
      }
      digits();
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct Operand {
  std::string reg;
  std::optional<unsigned> index;
  const Token* where = nullptr;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Circuit run() {
    if (peek_ident("OPENQASM")) {
      next();
      const Token& v = expect(Tok::Number, "version number");
      if (v.text.empty() || v.text[0] != '2') {
        throw UnsupportedFeature("only OpenQASM 2 is supported, got " + v.text);
      }
      expect_symbol(";");
    }
    while (peek().type != Tok::End) statement();
    if (!circuit_) {
      throw SyntaxError(peek().line, peek().column, "no qreg declared");
    }
    return std::move(*circuit_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool peek_ident(std::string_view s) const {
    return peek().type == Tok::Ident && peek().text == s;
  }
  bool peek_symbol(std::string_view s) const {
    return peek().type == Tok::Symbol && peek().text == s;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw SyntaxError(t.line, t.column, msg);
  }
  const Token& expect(Tok type, const char* what) {
    if (peek().type != type) {
      fail(peek(), std::string("expected ") + what + ", found '" +
                       (peek().type == Tok::End ? "end of input" : peek().text) +
                       "'");
    }
    return next();
  }
  void expect_symbol(std::string_view s) {
    if (!peek_symbol(s)) {
      fail(peek(), "expected '" + std::string(s) + "', found '" +
                       (peek().type == Tok::End ? "end of input" : peek().text) +
                       "'");
    }
    next();
  }

  unsigned parse_uint() {
    const Token& t = expect(Tok::Number, "integer");
    unsigned v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) {
      fail(t, "expected a non-negative integer, found '" + t.text + "'");
    }
    return v;
  }

  void statement() {
    const Token& head = peek();
    if (head.type != Tok::Ident) fail(head, "expected a statement");
    const std::string& kw = head.text;
    if (kw == "include") {
      next();
      const Token& file = expect(Tok::String, "file name");
      if (file.text != "qelib1.inc") {
        throw UnsupportedFeature("include of '" + file.text + "'");
      }
      expect_symbol(";");
    } else if (kw == "qreg") {
      next();
      const Token& name = expect(Tok::Ident, "register name");
      expect_symbol("[");
      const unsigned n = parse_uint();
      expect_symbol("]");
      expect_symbol(";");
      if (circuit_) throw UnsupportedFeature("multiple quantum registers");
      if (n == 0) fail(name, "quantum register must have at least one qubit");
      circuit_.emplace(n, creg_size_.value_or(0));
      qreg_ = name.text;
      circuit_->set_register_names(qreg_, creg_.empty() ? "c" : creg_);
    } else if (kw == "creg") {
      next();
      const Token& name = expect(Tok::Ident, "register name");
      expect_symbol("[");
      const unsigned n = parse_uint();
      expect_symbol("]");
      expect_symbol(";");
      if (creg_size_) throw UnsupportedFeature("multiple classical registers");
      creg_size_ = n;
      creg_ = name.text;
      if (circuit_) {
        circuit_->set_num_clbits(n);
        circuit_->set_register_names(qreg_, creg_);
      }
    } else if (kw == "gate" || kw == "opaque") {
      throw UnsupportedFeature("custom gate definitions ('" + kw + "')");
    } else if (kw == "if") {
      throw UnsupportedFeature("classically controlled operations ('if')");
    } else if (kw == "reset") {
      throw UnsupportedFeature("reset");
    } else if (kw == "measure") {
      next();
      measure_statement();
    } else if (kw == "barrier") {
      next();
      barrier_statement();
    } else {
      gate_statement();
    }
  }

  Circuit& require_circuit(const Token& at) {
    if (!circuit_) fail(at, "qreg must be declared before use");
    return *circuit_;
  }

  Operand operand() {
    Operand op;
    op.where = &peek();
    op.reg = expect(Tok::Ident, "register").text;
    if (peek_symbol("[")) {
      next();
      op.index = parse_uint();
      expect_symbol("]");
    }
    return op;
  }

  std::vector<unsigned> qubits_of(const Operand& op) {
    Circuit& c = require_circuit(*op.where);
    if (op.reg != qreg_) {
      fail(*op.where, "unknown quantum register '" + op.reg + "'");
    }
    if (op.index) {
      if (*op.index >= c.num_qubits()) {
        fail(*op.where, "qubit index " + std::to_string(*op.index) +
                            " out of range for register '" + op.reg + "'");
      }
      return {*op.index};
    }
    std::vector<unsigned> all(c.num_qubits());
    for (unsigned i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }

  void measure_statement() {
    Operand src = operand();
    if (peek().type != Tok::Arrow) fail(peek(), "expected '->'");
    next();
    Operand dst = operand();
    expect_symbol(";");
    Circuit& c = require_circuit(*src.where);
    if (!creg_size_ || dst.reg != creg_) {
      fail(*dst.where, "unknown classical register '" + dst.reg + "'");
    }
    const auto qs = qubits_of(src);
    if (src.index.has_value() != dst.index.has_value()) {
      fail(*dst.where, "measure operands must both be indexed or both whole registers");
    }
    if (!dst.index && qs.size() > *creg_size_) {
      fail(*dst.where, "classical register narrower than quantum register");
    }
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const unsigned bit = dst.index ? *dst.index : static_cast<unsigned>(i);
      if (bit >= *creg_size_) {
        fail(*dst.where, "classical bit index out of range");
      }
      c.measure(qs[i], bit);
      measured_.insert(qs[i]);
    }
  }

  void barrier_statement() {
    std::vector<unsigned> qs;
    while (true) {
      Operand op = operand();
      for (unsigned q : qubits_of(op)) qs.push_back(q);
      if (peek_symbol(",")) {
        next();
        continue;
      }
      break;
    }
    expect_symbol(";");
    circuit_->barrier(std::move(qs));
  }

  void gate_statement() {
    const Token& name_tok = next();
    const auto kind = kind_from_name(name_tok.text);
    if (!kind || !is_unitary_kind(*kind)) throw UnsupportedGate(name_tok.text);
    std::vector<double> params;
    if (peek_symbol("(")) {
      next();
      if (!peek_symbol(")")) {
        params.push_back(expr());
        while (peek_symbol(",")) {
          next();
          params.push_back(expr());
        }
      }
      expect_symbol(")");
    }
    if (params.size() != param_count(*kind)) {
      fail(name_tok, "gate '" + name_tok.text + "' expects " +
                         std::to_string(param_count(*kind)) +
                         " parameter(s), got " + std::to_string(params.size()));
    }
    std::vector<Operand> ops;
    ops.push_back(operand());
    while (peek_symbol(",")) {
      next();
      ops.push_back(operand());
    }
    expect_symbol(";");
    if (ops.size() != arity(*kind)) {
      fail(name_tok, "gate '" + name_tok.text + "' expects " +
                         std::to_string(arity(*kind)) + " qubit operand(s)");
    }
    Circuit& c = require_circuit(name_tok);
    if (ops.size() == 1 && !ops[0].index) {
      for (unsigned q : qubits_of(ops[0])) emit_gate(c, name_tok, *kind, {q}, params);
      return;
    }
    std::vector<unsigned> qs;
    for (const auto& op : ops) {
      if (!op.index) {
        throw UnsupportedFeature(
            "register broadcast for multi-qubit gate '" + name_tok.text + "'");
      }
      qs.push_back(qubits_of(op).front());
    }
    emit_gate(c, name_tok, *kind, std::move(qs), params);
  }

  void emit_gate(Circuit& c, const Token& at, GateKind kind,
                 std::vector<unsigned> qs, const std::vector<double>& params) {
    for (unsigned q : qs) {
      if (measured_.count(q)) {
        throw UnsupportedFeature(
            "mid-circuit measurement (gate on qubit " + std::to_string(q) +
            " after it was measured)");
      }
    }
    try {
      c.add(kind, std::move(qs), params);
    } catch (const InvalidGate& e) {
      fail(at, e.what());
    }
  }

  // expr := term (('+'|'-') term)*
  double expr() {
    double v = term();
    while (peek_symbol("+") || peek_symbol("-")) {
      const bool plus = next().text == "+";
      const double rhs = term();
      v = plus ? v + rhs : v - rhs;
    }
    return v;
  }

  // term := unary (('*'|'/') unary)*
  double term() {
    double v = unary();
    while (peek_symbol("*") || peek_symbol("/")) {
      const Token& op = next();
      const double rhs = unary();
      if (op.text == "*") {
        v *= rhs;
      } else {
        if (rhs == 0.0) fail(op, "division by zero in gate parameter");
        v /= rhs;
      }
    }
    return v;
  }

  double unary() {
    if (peek_symbol("-")) {
      next();
      return -unary();
    }
    if (peek_symbol("+")) {
      next();
      return unary();
    }
    return power();
  }

  double power() {
    const double base = primary();
    if (peek_symbol("^")) {
      next();
      return std::pow(base, unary());
    }
    return base;
  }

  double primary() {
    const Token& t = peek();
    if (t.type == Tok::Number) {
      next();
      double v = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || p != t.text.data() + t.text.size()) {
        fail(t, "malformed number '" + t.text + "'");
      }
      return v;
    }
    if (t.type == Tok::Ident) {
      next();
      if (t.text == "pi") return std::numbers::pi;
      static const std::vector<std::pair<std::string_view, double (*)(double)>>
          fns{{"sin", [](double x) { return std::sin(x); }},
              {"cos", [](double x) { return std::cos(x); }},
              {"tan", [](double x) { return std::tan(x); }},
              {"exp", [](double x) { return std::exp(x); }},
              {"ln", [](double x) { return std::log(x); }},
              {"sqrt", [](double x) { return std::sqrt(x); }}};
      for (const auto& [name, fn] : fns) {
        if (t.text == name) {
          expect_symbol("(");
          const double arg = expr();
          expect_symbol(")");
          return fn(arg);
        }
      }
      fail(t, "unknown identifier '" + t.text + "' in expression");
    }
    if (t.type == Tok::Symbol && t.text == "(") {
      next();
      const double v = expr();
      expect_symbol(")");
      return v;
    }
    fail(t, "expected an expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::optional<Circuit> circuit_;
  std::string qreg_;
  std::string creg_;
  std::optional<unsigned> creg_size_;
  std::set<unsigned> measured_;
};

inline std::string format_angle(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace qasm_detail

/// Parses OpenQASM 2.0 source restricted to the supported gate catalog and a
/// single quantum register.
inline Circuit parse_qasm(std::string_view text) {
  qasm_detail::Lexer lexer(text);
  qasm_detail::Parser parser(lexer.run());
  return parser.run();
}

/// Writes a circuit as OpenQASM 2.0. Angles use the shortest decimal form
/// that reads back to the same double.
inline std::string emit_qasm(const Circuit& c) {
  std::ostringstream out;
  const std::string& q = c.qreg_name();
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg " << q << '[' << c.num_qubits() << "];\n";
  if (c.num_clbits() > 0) {
    out << "creg " << c.creg_name() << '[' << c.num_clbits() << "];\n";
  }
  auto emit_barriers_before = [&](std::size_t pos) {
    for (const auto& b : c.barriers()) {
      if (b.before != pos) continue;
      out << "barrier ";
      for (std::size_t i = 0; i < b.qubits.size(); ++i) {
        if (i) out << ',';
        out << q << '[' << b.qubits[i] << ']';
      }
      out << ";\n";
    }
  };
  for (const auto& g : c.gates()) {
    emit_barriers_before(g.position);
    out << name_of(g.kind);
    if (!g.params.empty()) {
      out << '(';
      for (std::size_t i = 0; i < g.params.size(); ++i) {
        if (i) out << ',';
        out << qasm_detail::format_angle(g.params[i]);
      }
      out << ')';
    }
    out << ' ';
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (i) out << ',';
      out << q << '[' << g.qubits[i] << ']';
    }
    out << ";\n";
  }
  emit_barriers_before(c.size());
  for (const auto& [qubit, bit] : c.measurements()) {
    out << "measure " << q << '[' << qubit << "] -> " << c.creg_name() << '['
        << bit << "];\n";
  }
  return out.str();
}

}  // namespace qrep
