/*
 * Copyright 2026 The dsdevs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dsdevs/behavior.hpp"
#include "dsdevs/error.hpp"
#include "dsdevs/root.hpp"
#include "dsdevs/spec.hpp"
#include "dsdevs/validate.hpp"

namespace dsdevs {

inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Lexer shared by model documents and scorer inputs.

namespace io {

enum class Tok { Ident, Path, Integer, Real, String, Punct, Arrow, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifiers, punctuation, raw numbers, unescaped strings
  SourceLocation at;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokens() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      Token t;
      t.at = {line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (c == '"') {
        t.kind = Tok::String;
        t.text = string_literal();
      } else if (c == '-' && peek(1) == '>') {
        t.kind = Tok::Arrow;
        t.text = "->";
        advance(2);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && (std::isdigit(static_cast<unsigned char>(peek(1))) ||
                               src_.substr(pos_, 4) == "-inf"))) {
        number(t);
      } else if (c == '/' && ident_char(peek(1))) {
        t.kind = Tok::Path;
        t.text = take_while([](char ch) { return ident_char(ch) || ch == '/'; });
      } else if (ident_start(c)) {
        t.kind = Tok::Ident;
        t.text = take_while([](char ch) { return ident_char(ch) || ch == '/'; });
      } else if (std::string_view("{}:=.,;").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
        advance(1);
      } else {
        throw ParseError(t.at, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  template <class Pred>
  std::string take_while(Pred p) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && p(src_[pos_])) advance(1);
    return std::string(src_.substr(start, pos_ - start));
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        return;
      }
    }
  }

  void number(Token& t) {
    std::string s;
    if (src_[pos_] == '-') {
      s += '-';
      advance(1);
    }
    if (src_.substr(pos_, 3) == "inf") {
      advance(3);
      t.kind = Tok::Real;
      t.text = s + "inf";
      return;
    }
    bool real = false;
    s += take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
    if (pos_ < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      real = true;
      advance(1);
      s += "." + take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t k = 1;
      if (peek(1) == '+' || peek(1) == '-') k = 2;
      if (std::isdigit(static_cast<unsigned char>(peek(k)))) {
        real = true;
        s += 'e';
        if (k == 2) s += peek(1);
        advance(k);
        s += take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
      }
    }
    t.kind = real ? Tok::Real : Tok::Integer;
    t.text = s;
  }

  std::string string_literal() {
    SourceLocation start{line_, col_};
    advance(1);
    std::string out;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        throw ParseError(start, "unterminated string");
      }
      char c = src_[pos_];
      if (c == '"') {
        advance(1);
        return out;
      }
      if (c == '\\') {
        char e = peek(1);
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: throw ParseError({line_, col_}, std::string("bad escape '\\") + e + "'");
        }
        advance(2);
        continue;
      }
      out += c;
      advance(1);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// Token cursor with the small vocabulary every document needs: header,
// literals and type tags.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : toks_(Lexer(text).tokens()) {}

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }

  bool is(std::string_view text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident || t.kind == Tok::Arrow) && t.text == text;
  }

  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(peek().at, what); }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::String: return "string \"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }

  const Token& expect(std::string_view text) {
    if (!is(text)) fail("expected '" + std::string(text) + "', found " + describe(peek()));
    return next();
  }

  const Token& ident(std::string_view what) {
    if (peek().kind != Tok::Ident) fail("expected " + std::string(what) + ", found " + describe(peek()));
    return next();
  }

  std::int64_t integer(std::string_view what) {
    if (peek().kind != Tok::Integer) fail("expected " + std::string(what) + ", found " + describe(peek()));
    const Token& t = next();
    try {
      return std::stoll(t.text);
    } catch (...) {
      throw ParseError(t.at, "integer out of range: " + t.text);
    }
  }

  double number(std::string_view what) {
    const Token& t = peek();
    if (t.kind == Tok::Integer) return static_cast<double>(integer(what));
    if (t.kind != Tok::Real) fail("expected " + std::string(what) + ", found " + describe(t));
    next();
    return to_real(t);
  }

  SimTime time(std::string_view what) {
    SourceLocation at = peek().at;
    if (is("inf")) {
      next();
      return SimTime::infinity();
    }
    double v = number(what);
    if (std::isinf(v) && v > 0) return SimTime::infinity();
    if (!(v >= 0)) throw ParseError(at, "time must be non-negative");
    return SimTime(v);
  }

  void header() {
    const Token& t = peek();
    if (!is("dsdevs")) fail("expected header 'dsdevs " + std::to_string(kFormatVersion) + "'");
    next();
    SourceLocation at = peek().at;
    std::int64_t v = integer("format version");
    if (v != kFormatVersion) {
      throw ParseError(at, "unsupported format version " + std::to_string(v));
    }
    (void)t;
  }

  Value value() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Integer: return Value(integer("integer"));
      case Tok::Real: next(); return Value(to_real(t));
      case Tok::String: return Value(next().text);
      case Tok::Ident:
        if (t.text == "true" || t.text == "false") return Value(next().text == "true");
        if (t.text == "inf") {
          next();
          return Value(std::numeric_limits<double>::infinity());
        }
        fail("expected a value, found " + describe(t));
      default: break;
    }
    if (!is("{")) fail("expected a value, found " + describe(t));
    SourceLocation at = next().at;
    Value::Record fields;
    while (!accept("}")) {
      const Token& name = ident("field name");
      expect("=");
      fields.emplace_back(name.text, value());
      if (!is("}")) expect(",");
    }
    try {
      return Value::record(std::move(fields));
    } catch (const UsageError& e) {
      throw ParseError(at, e.what());
    }
  }

  ValueType type() {
    const Token& t = ident("a type");
    if (t.text == "integer") return ValueType::integer();
    if (t.text == "real") return ValueType::real();
    if (t.text == "boolean") return ValueType::boolean();
    if (t.text == "text") return ValueType::text();
    if (t.text != "record") throw ParseError(t.at, "unknown type '" + t.text + "'");
    expect("{");
    std::vector<ValueType::Field> fields;
    while (!accept("}")) {
      const Token& name = ident("field name");
      expect(":");
      fields.emplace_back(name.text, type());
      if (!is("}")) expect(",");
    }
    try {
      return ValueType::record(std::move(fields));
    } catch (const UsageError& e) {
      throw ParseError(t.at, e.what());
    }
  }

 private:
  static double to_real(const Token& t) {
    if (t.text == "inf") return std::numeric_limits<double>::infinity();
    if (t.text == "-inf") return -std::numeric_limits<double>::infinity();
    auto v = detail::parse_double(t.text);
    if (!v) throw ParseError(t.at, "bad number '" + t.text + "'");
    return *v;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace io

// ---------------------------------------------------------------------------
// Model documents.

struct ModelDocument {
  Mode mode = Mode::Parallel;
  ChangePolicy policy;
  std::optional<SimTime> time_limit;
  std::optional<std::uint64_t> step_limit;
  CoupledSpec root;

  // Source positions for diagnostics. Keys: "<scope>|<component>" for
  // components, "<scope>|<component>|<dir>|<port>" for ports (component is
  // empty for network ports) and "<scope>|<coupling>" for couplings.
  std::map<std::string, SourceLocation> locations;

  RunConfig config() const {
    RunConfig c;
    c.mode = mode;
    c.policy = policy;
    c.time_limit = time_limit;
    c.step_limit = step_limit;
    return c;
  }

  friend bool operator==(const ModelDocument& a, const ModelDocument& b) {
    return a.mode == b.mode && a.policy == b.policy && a.time_limit == b.time_limit &&
           a.step_limit == b.step_limit && a.root == b.root;
  }
};

namespace detail {

inline std::string loc_key(const ModelPath& scope, const std::string& component) {
  return scope.str() + "|" + component;
}
inline std::string loc_key(const ModelPath& scope, const std::string& component, Direction d,
                           const std::string& port) {
  return scope.str() + "|" + component + "|" + std::string(to_string(d)) + "|" + port;
}

class ModelParser {
 public:
  explicit ModelParser(std::string_view text) : c_(text) {}

  ModelDocument parse() {
    c_.header();
    bool have_mode = false, have_policy = false, have_time = false, have_steps = false;
    while (!c_.is("root")) {
      const io::Token& t = c_.peek();
      if (c_.accept("mode")) {
        if (have_mode) throw ParseError(t.at, "duplicate 'mode'");
        have_mode = true;
        const io::Token& m = c_.ident("classic or parallel");
        if (m.text == "classic") {
          doc_.mode = Mode::Classic;
        } else if (m.text == "parallel") {
          doc_.mode = Mode::Parallel;
        } else {
          throw ParseError(m.at, "unknown mode '" + m.text + "'");
        }
      } else if (c_.accept("policy")) {
        if (have_policy) throw ParseError(t.at, "duplicate 'policy'");
        have_policy = true;
        policy();
      } else if (c_.accept("stop")) {
        const io::Token& what = c_.ident("'time' or 'steps'");
        if (what.text == "time") {
          if (have_time) throw ParseError(what.at, "duplicate 'stop time'");
          have_time = true;
          doc_.time_limit = c_.time("time limit");
        } else if (what.text == "steps") {
          if (have_steps) throw ParseError(what.at, "duplicate 'stop steps'");
          have_steps = true;
          SourceLocation at = c_.peek().at;
          std::int64_t n = c_.integer("step count");
          if (n < 0) throw ParseError(at, "step limit must be non-negative");
          doc_.step_limit = static_cast<std::uint64_t>(n);
        } else {
          throw ParseError(what.at, "expected 'time' or 'steps' after 'stop'");
        }
      } else if (c_.at_end()) {
        c_.fail("missing 'root' block");
      } else {
        c_.fail("unexpected " + io::Cursor::describe(t) + " in header");
      }
    }
    doc_.locations["/|"] = c_.expect("root").at;
    doc_.root = coupled_body(ModelPath::root());
    if (!c_.at_end()) c_.fail("unexpected " + io::Cursor::describe(c_.peek()) + " after root block");
    return std::move(doc_);
  }

 private:
  void policy() {
    const io::Token& a = c_.ident("'distributed' or 'executive'");
    if (a.text == "distributed") {
      doc_.policy.authority = Authority::Distributed;
    } else if (a.text == "executive") {
      doc_.policy.authority = Authority::ExecutiveOnly;
      if (c_.peek().kind != io::Tok::Path) c_.fail("expected executive path like /exec");
      doc_.policy.executive = ModelPath::parse(c_.next().text);
    } else {
      throw ParseError(a.at, "unknown policy '" + a.text + "'");
    }
    if (c_.accept("strict")) {
      doc_.policy.conflict = ConflictMode::Strict;
    } else if (c_.accept("lenient")) {
      doc_.policy.conflict = ConflictMode::Lenient;
    }
  }

  PortSpec port_decl(Direction dir, const ModelPath& scope, const std::string& component) {
    const io::Token& name = c_.ident("port name");
    c_.expect(":");
    PortSpec p{name.text, dir, c_.type()};
    doc_.locations[loc_key(scope, component, dir, p.name)] = name.at;
    return p;
  }

  Endpoint endpoint() {
    const io::Token& first = c_.ident("endpoint");
    if (c_.accept(".")) {
      const io::Token& port = c_.ident("port name");
      return {first.text, port.text};
    }
    return {"", first.text};
  }

  CoupledSpec coupled_body(const ModelPath& scope) {
    c_.expect("{");
    CoupledSpec spec;
    bool have_select = false;
    while (!c_.accept("}")) {
      const io::Token& kw = c_.peek();
      if (c_.accept("in")) {
        spec.ports.push_back(port_decl(Direction::In, scope, ""));
      } else if (c_.accept("out")) {
        spec.ports.push_back(port_decl(Direction::Out, scope, ""));
      } else if (c_.accept("atomic")) {
        const io::Token& name = c_.ident("component name");
        doc_.locations[loc_key(scope, name.text)] = name.at;
        c_.expect(":");
        const io::Token& behavior = c_.ident("behavior name");
        spec.components.push_back({name.text, ModelSpec(atomic_body(behavior.text, scope, name.text))});
      } else if (c_.accept("coupled")) {
        const io::Token& name = c_.ident("component name");
        doc_.locations[loc_key(scope, name.text)] = name.at;
        spec.components.push_back({name.text, ModelSpec(coupled_body(scope.child(name.text)))});
      } else if (c_.is("eic") || c_.is("eoc") || c_.is("ic")) {
        c_.next();
        Endpoint from = endpoint();
        c_.expect("->");
        Endpoint to = endpoint();
        Coupling cp{from, to};
        std::string declared = kw.text;
        if (from.is_network() && to.is_network()) {
          throw ParseError(kw.at, "coupling " + cp.str() + " joins two network ports");
        }
        if (to_string(cp.kind()) != declared) {
          throw ParseError(kw.at, "coupling " + cp.str() + " is " + std::string(to_string(cp.kind())) +
                                      ", not " + declared);
        }
        if (!spec.add_coupling(cp)) throw ParseError(kw.at, "duplicate coupling " + cp.str());
        doc_.locations[scope.str() + "|" + cp.str()] = kw.at;
      } else if (c_.accept("select")) {
        if (have_select) throw ParseError(kw.at, "duplicate 'select'");
        have_select = true;
        while (c_.peek().kind == io::Tok::Ident && !is_keyword(c_.peek().text)) {
          spec.select_order.push_back(c_.next().text);
        }
        if (spec.select_order.empty()) throw ParseError(kw.at, "empty select order");
        c_.accept(";");
      } else if (c_.accept(";")) {
      } else {
        c_.fail("unexpected " + io::Cursor::describe(kw) + " in coupled model");
      }
    }
    return spec;
  }

  static bool is_keyword(const std::string& s) {
    return s == "in" || s == "out" || s == "atomic" || s == "coupled" || s == "eic" ||
           s == "eoc" || s == "ic" || s == "select";
  }

  AtomicSpec atomic_body(const std::string& behavior, const ModelPath& scope,
                         const std::string& name) {
    AtomicSpec spec{behavior, Value::record({}), std::nullopt};
    if (!c_.is("{")) return spec;
    c_.next();
    Value::Record params;
    std::vector<PortSpec> ports;
    while (!c_.accept("}")) {
      if (c_.accept(";") || c_.accept(",")) continue;
      if ((c_.is("in") || c_.is("out")) && c_.peek(1).kind == io::Tok::Ident &&
          c_.peek(2).text == ":") {
        Direction d = c_.next().text == "in" ? Direction::In : Direction::Out;
        ports.push_back(port_decl(d, scope, name));
        continue;
      }
      const io::Token& key = c_.ident("parameter name");
      for (const auto& [k, v] : params) {
        if (k == key.text) throw ParseError(key.at, "duplicate parameter '" + key.text + "'");
      }
      c_.expect("=");
      params.emplace_back(key.text, c_.value());
    }
    spec.params = Value::record(std::move(params));
    if (!ports.empty()) spec.ports = std::move(ports);
    return spec;
  }

  io::Cursor c_;
  ModelDocument doc_;
};

inline std::string where(const ModelDocument& doc, const std::string& key) {
  auto it = doc.locations.find(key);
  return it == doc.locations.end() ? std::string("?") : it->second.str();
}

// Location of the declaration behind one coupling endpoint: the explicit
// port line when there is one, otherwise the component.
inline std::string port_location(const ModelDocument& doc, const ModelPath& scope,
                                 const Endpoint& e, bool source) {
  Direction d = e.is_network() ? (source ? Direction::In : Direction::Out)
                               : (source ? Direction::Out : Direction::In);
  auto it = doc.locations.find(loc_key(scope, e.component, d, e.port));
  if (it != doc.locations.end()) return it->second.str();
  return where(doc, loc_key(scope, e.component));
}

inline const CoupledSpec* find_scope(const CoupledSpec& root, const ModelPath& scope) {
  const CoupledSpec* cur = &root;
  for (const auto& seg : scope.segments()) {
    const Component* c = cur->find(seg);
    if (!c || c->model.is_atomic()) return nullptr;
    cur = &c->model.coupled();
  }
  return cur;
}

inline std::string endpoint_type(const CoupledSpec& scope, const Catalog& catalog,
                                 const Endpoint& e, bool source) {
  const PortSpec* p = nullptr;
  std::vector<PortSpec> ports;
  if (e.is_network()) {
    p = scope.port(e.port, source ? Direction::In : Direction::Out);
  } else if (const Component* c = scope.find(e.component)) {
    ports = c->model.is_atomic() ? catalog.ports_of(c->model.atomic()) : c->model.coupled().ports;
    p = find_port(ports, e.port, source ? Direction::Out : Direction::In);
  }
  return p ? p->type.str() : "?";
}

}  // namespace detail

// Syntax only; raises ParseError with line:column.
inline ModelDocument parse_document(std::string_view text) {
  return detail::ModelParser(text).parse();
}

// Semantic checks of a parsed document. Throws ValidationError naming the
// first issue and the source positions involved.
inline void validate_document(const ModelDocument& doc, const Catalog& catalog) {
  auto issues = validate_spec(doc.root, catalog, doc.mode == Mode::Classic);
  if (!issues.empty()) {
    const SpecIssue& i = issues.front();
    std::string at;
    if (i.coupling) {
      at = detail::where(doc, i.scope.str() + "|" + i.coupling->str());
    } else if (!i.component.empty()) {
      at = detail::where(doc, detail::loc_key(i.scope, i.component));
    } else if (i.scope.is_root()) {
      at = detail::where(doc, "/|");
    } else {
      at = detail::where(doc, detail::loc_key(i.scope.parent(), i.scope.name()));
    }
    std::string msg = at + ": " + std::string(to_string(i.reason())) + ": " + i.detail;
    if (i.kind == SpecIssue::Kind::TypeMismatch && i.coupling) {
      const CoupledSpec* scope = detail::find_scope(doc.root, i.scope);
      const Coupling& c = *i.coupling;
      msg += " (" + c.from.str() + " : " + detail::endpoint_type(*scope, catalog, c.from, true) +
             " declared at " + detail::port_location(doc, i.scope, c.from, true) + "; " +
             c.to.str() + " : " + detail::endpoint_type(*scope, catalog, c.to, false) +
             " declared at " + detail::port_location(doc, i.scope, c.to, false) + ")";
    }
    throw ValidationError(msg);
  }
  if (doc.policy.authority == Authority::ExecutiveOnly) {
    const CoupledSpec* scope = doc.policy.executive.is_root()
                                   ? nullptr
                                   : detail::find_scope(doc.root, doc.policy.executive.parent());
    if (!scope || !scope->find(doc.policy.executive.name())) {
      throw ValidationError("executive " + doc.policy.executive.str() + " does not name a component");
    }
  }
}

inline ModelDocument parse_model(std::string_view text, const Catalog& catalog) {
  ModelDocument doc = parse_document(text);
  validate_document(doc, catalog);
  return doc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Printing. print_document(parse_document(x)) re-parses to an equal document.

namespace detail {

inline void print_coupled(const CoupledSpec& spec, const std::string& indent, std::ostream& out) {
  for (const auto& p : spec.ports) {
    out << indent << to_string(p.direction) << " " << p.name << " : " << p.type.str() << "\n";
  }
  for (const auto& comp : spec.components) {
    if (comp.model.is_atomic()) {
      const AtomicSpec& a = comp.model.atomic();
      out << indent << "atomic " << comp.name << " : " << a.behavior;
      const auto& params = a.params.fields();
      if (!a.ports) {
        if (!params.empty()) {
          out << " {";
          for (const auto& [k, v] : params) out << " " << k << " = " << v.str();
          out << " }";
        }
        out << "\n";
        continue;
      }
      out << " {\n";
      for (const auto& [k, v] : params) out << indent << "  " << k << " = " << v.str() << "\n";
      for (const auto& p : *a.ports) {
        out << indent << "  " << to_string(p.direction) << " " << p.name << " : " << p.type.str()
            << "\n";
      }
      out << indent << "}\n";
    } else {
      out << indent << "coupled " << comp.name << " {\n";
      print_coupled(comp.model.coupled(), indent + "  ", out);
      out << indent << "}\n";
    }
  }
  for (const auto& c : spec.couplings) {
    out << indent << to_string(c.kind()) << " " << c.from.str() << " -> " << c.to.str() << "\n";
  }
  if (!spec.select_order.empty()) {
    out << indent << "select";
    for (const auto& s : spec.select_order) out << " " << s;
    out << "\n";
  }
}

}  // namespace detail

inline std::string print_document(const ModelDocument& doc) {
  std::ostringstream out;
  out << "dsdevs " << kFormatVersion << "\n";
  out << "mode " << to_string(doc.mode) << "\n";
  out << "policy ";
  if (doc.policy.authority == Authority::Distributed) {
    out << "distributed";
  } else {
    out << "executive " << doc.policy.executive.str();
  }
  out << (doc.policy.conflict == ConflictMode::Strict ? " strict" : " lenient") << "\n";
  if (doc.time_limit) out << "stop time " << doc.time_limit->str() << "\n";
  if (doc.step_limit) out << "stop steps " << *doc.step_limit << "\n";
  out << "\nroot {\n";
  detail::print_coupled(doc.root, "  ", out);
  out << "}\n";
  return out.str();
}

}  // namespace dsdevs
