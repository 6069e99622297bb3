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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dsdevs/error.hpp"
#include "dsdevs/time.hpp"

namespace dsdevs {

// Closed set of value types carried on ports and held in model state.
class ValueType {
 public:
  enum class Kind { Integer, Real, Boolean, Text, Record };
  using Field = std::pair<std::string, ValueType>;

  ValueType() = default;

  static ValueType integer() { return ValueType(Kind::Integer); }
  static ValueType real() { return ValueType(Kind::Real); }
  static ValueType boolean() { return ValueType(Kind::Boolean); }
  static ValueType text() { return ValueType(Kind::Text); }

  // Field names must be unique; fields are kept sorted by name.
  static ValueType record(std::vector<Field> fields) {
    std::sort(fields.begin(), fields.end(),
              [](const Field& a, const Field& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i].first == fields[i - 1].first) {
        throw UsageError("duplicate record field '" + fields[i].first + "'");
      }
    }
    ValueType t(Kind::Record);
    t.fields_ = std::move(fields);
    return t;
  }

  Kind kind() const { return kind_; }
  const std::vector<Field>& fields() const { return fields_; }

  const ValueType* field(std::string_view name) const {
    for (const auto& [n, t] : fields_) {
      if (n == name) return &t;
    }
    return nullptr;
  }

  // integer | real | boolean | text | record{a:integer,b:real}
  std::string str() const {
    switch (kind_) {
      case Kind::Integer: return "integer";
      case Kind::Real: return "real";
      case Kind::Boolean: return "boolean";
      case Kind::Text: return "text";
      case Kind::Record: {
        std::string out = "record{";
        for (std::size_t i = 0; i < fields_.size(); ++i) {
          if (i) out += ',';
          out += fields_[i].first + ":" + fields_[i].second.str();
        }
        return out + "}";
      }
    }
    return "?";
  }

  friend bool operator==(const ValueType& a, const ValueType& b) {
    return a.kind_ == b.kind_ && a.fields_ == b.fields_;
  }

 private:
  explicit ValueType(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Integer;
  std::vector<Field> fields_;
};

// A typed value: integer, real, boolean, text or record of named values.
class Value {
 public:
  using Field = std::pair<std::string, Value>;
  using Record = std::vector<Field>;

  Value() : data_(std::int64_t{0}) {}
  Value(std::int64_t v) : data_(v) {}
  Value(int v) : data_(std::int64_t{v}) {}
  Value(double v) : data_(v) {}
  Value(bool v) : data_(v) {}
  Value(std::string v) : data_(std::move(v)) {}
  Value(const char* v) : data_(std::string(v)) {}

  static Value record(Record fields) {
    std::sort(fields.begin(), fields.end(),
              [](const Field& a, const Field& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i].first == fields[i - 1].first) {
        throw UsageError("duplicate record field '" + fields[i].first + "'");
      }
    }
    Value v;
    v.data_ = std::move(fields);
    return v;
  }

  ValueType::Kind kind() const {
    return static_cast<ValueType::Kind>(data_.index());
  }
  bool is_integer() const { return kind() == ValueType::Kind::Integer; }
  bool is_real() const { return kind() == ValueType::Kind::Real; }
  bool is_boolean() const { return kind() == ValueType::Kind::Boolean; }
  bool is_text() const { return kind() == ValueType::Kind::Text; }
  bool is_record() const { return kind() == ValueType::Kind::Record; }

  std::int64_t as_integer() const { return get<std::int64_t>("integer"); }
  double as_real() const { return get<double>("real"); }
  bool as_boolean() const { return get<bool>("boolean"); }
  const std::string& as_text() const { return get<std::string>("text"); }
  const Record& fields() const { return get<Record>("record"); }

  // Integer or real, widened to double.
  double as_number() const {
    if (is_integer()) return static_cast<double>(as_integer());
    return as_real();
  }

  const Value* find(std::string_view name) const {
    if (!is_record()) return nullptr;
    for (const auto& [n, v] : fields()) {
      if (n == name) return &v;
    }
    return nullptr;
  }

  const Value& at(std::string_view name) const {
    if (const Value* v = find(name)) return *v;
    throw UsageError("record has no field '" + std::string(name) + "'");
  }

  // Insert or replace a record field, keeping the field order canonical.
  void set(std::string_view name, Value v) {
    auto& rec = std::get<Record>(data_);
    auto it = std::lower_bound(rec.begin(), rec.end(), name,
                               [](const Field& f, std::string_view n) { return f.first < n; });
    if (it != rec.end() && it->first == name) {
      it->second = std::move(v);
    } else {
      rec.insert(it, Field{std::string(name), std::move(v)});
    }
  }

  Value with(std::string_view name, Value v) const {
    Value copy = *this;
    copy.set(name, std::move(v));
    return copy;
  }

  ValueType type() const {
    switch (kind()) {
      case ValueType::Kind::Integer: return ValueType::integer();
      case ValueType::Kind::Real: return ValueType::real();
      case ValueType::Kind::Boolean: return ValueType::boolean();
      case ValueType::Kind::Text: return ValueType::text();
      case ValueType::Kind::Record: {
        std::vector<ValueType::Field> fs;
        for (const auto& [n, v] : fields()) fs.emplace_back(n, v.type());
        return ValueType::record(std::move(fs));
      }
    }
    return ValueType::integer();
  }

  // Canonical text: 7, 2.0, 0.4, inf, true, "a\"b", {x=1,y=2.5}.
  // Reals always carry a '.', an exponent or "inf" so the rendering is typed.
  std::string str() const {
    switch (kind()) {
      case ValueType::Kind::Integer: return std::to_string(as_integer());
      case ValueType::Kind::Real: return render_real(as_real());
      case ValueType::Kind::Boolean: return as_boolean() ? "true" : "false";
      case ValueType::Kind::Text: return quote(as_text());
      case ValueType::Kind::Record: {
        std::string out = "{";
        bool first = true;
        for (const auto& [n, v] : fields()) {
          if (!first) out += ',';
          first = false;
          out += n + "=" + v.str();
        }
        return out + "}";
      }
    }
    return "?";
  }

  static std::string render_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::string s = detail::format_shortest(v);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
  }

  static std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    return out + "\"";
  }

  friend bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }

 private:
  template <typename T>
  const T& get(const char* expected) const {
    if (const T* p = std::get_if<T>(&data_)) return *p;
    throw TypeMismatchError("expected " + std::string(expected) + " value, got " + str());
  }

  std::variant<std::int64_t, double, bool, std::string, Record> data_;
};

struct TypeMismatch {
  std::string path;  // "" for the value itself, otherwise ".a.b"
  std::string detail;

  std::string str() const {
    return (path.empty() ? std::string("value") : "field " + path) + ": " + detail;
  }
};

namespace detail {

inline std::optional<TypeMismatch> check_value_at(const Value& value, const ValueType& tag,
                                                  const std::string& path) {
  if (tag.kind() != ValueType::Kind::Record) {
    if (value.kind() == tag.kind()) return std::nullopt;
    return TypeMismatch{path, "expected " + tag.str() + ", got " + value.str()};
  }
  if (!value.is_record()) {
    return TypeMismatch{path, "expected " + tag.str() + ", got " + value.str()};
  }
  const auto& fields = value.fields();
  for (const auto& [name, field_tag] : tag.fields()) {
    const Value* v = value.find(name);
    if (!v) return TypeMismatch{path + "." + name, "missing field of type " + field_tag.str()};
    if (auto m = check_value_at(*v, field_tag, path + "." + name)) return m;
  }
  if (fields.size() != tag.fields().size()) {
    for (const auto& [name, v] : fields) {
      if (!tag.field(name)) return TypeMismatch{path + "." + name, "unexpected field"};
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Structural conformance of `value` to `tag`, recursively through records.
// Returns the first mismatch, or nothing when the value conforms.
inline std::optional<TypeMismatch> check_value(const Value& value, const ValueType& tag) {
  return detail::check_value_at(value, tag, "");
}

namespace detail {

inline ValueType parse_type_at(std::string_view text, std::size_t& pos) {
  auto skip = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto word = [&] {
    skip();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    return std::string(text.substr(start, pos - start));
  };
  auto expect = [&](char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) {
      throw UsageError("bad type '" + std::string(text) + "': expected '" + std::string(1, c) +
                       "'");
    }
    ++pos;
  };
  std::string w = word();
  if (w == "integer") return ValueType::integer();
  if (w == "real") return ValueType::real();
  if (w == "boolean") return ValueType::boolean();
  if (w == "text") return ValueType::text();
  if (w != "record") throw UsageError("unknown type '" + w + "'");
  expect('{');
  std::vector<ValueType::Field> fields;
  skip();
  if (pos < text.size() && text[pos] == '}') {
    ++pos;
    return ValueType::record({});
  }
  while (true) {
    std::string name = word();
    if (name.empty()) throw UsageError("bad type '" + std::string(text) + "': missing field name");
    expect(':');
    fields.emplace_back(name, parse_type_at(text, pos));
    skip();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    expect('}');
    return ValueType::record(std::move(fields));
  }
}

}  // namespace detail

// Parses the rendering produced by ValueType::str().
inline ValueType parse_type(std::string_view text) {
  std::size_t pos = 0;
  ValueType t = detail::parse_type_at(text, pos);
  while (pos < text.size() && text[pos] == ' ') ++pos;
  if (pos != text.size()) throw UsageError("trailing text in type '" + std::string(text) + "'");
  return t;
}

// Like check_value, but widens integers where reals are expected.
inline std::optional<Value> coerce_value(const Value& value, const ValueType& tag) {
  if (tag.kind() == ValueType::Kind::Real && value.is_integer()) {
    return Value(static_cast<double>(value.as_integer()));
  }
  if (tag.kind() == ValueType::Kind::Record && value.is_record()) {
    Value::Record out;
    for (const auto& [name, field_tag] : tag.fields()) {
      const Value* v = value.find(name);
      if (!v) return std::nullopt;
      auto c = coerce_value(*v, field_tag);
      if (!c) return std::nullopt;
      out.emplace_back(name, std::move(*c));
    }
    if (value.fields().size() != out.size()) return std::nullopt;
    return Value::record(std::move(out));
  }
  if (check_value(value, tag)) return std::nullopt;
  return value;
}

}  // namespace dsdevs
