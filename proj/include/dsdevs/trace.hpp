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

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dsdevs/error.hpp"
#include "dsdevs/time.hpp"

namespace dsdevs {

enum class TraceKind {
  Output,
  Internal,
  External,
  Confluent,
  StructureAddModel,
  StructureRemoveModel,
  StructureAddCoupling,
  StructureRemoveCoupling,
  StructurePort,
  Init,
  Halt,
  Error,
};

inline constexpr std::string_view kTraceKindNames[] = {
    "output",
    "internal",
    "external",
    "confluent",
    "structure_add_model",
    "structure_remove_model",
    "structure_add_coupling",
    "structure_remove_coupling",
    "structure_port",
    "init",
    "halt",
    "error",
};

inline std::string_view to_string(TraceKind k) { return kTraceKindNames[static_cast<int>(k)]; }

inline std::optional<TraceKind> parse_trace_kind(std::string_view s) {
  for (int i = 0; i < static_cast<int>(std::size(kTraceKindNames)); ++i) {
    if (kTraceKindNames[i] == s) return static_cast<TraceKind>(i);
  }
  return std::nullopt;
}

inline bool is_transition(TraceKind k) {
  return k == TraceKind::Internal || k == TraceKind::External || k == TraceKind::Confluent;
}

inline bool is_structure(TraceKind k) {
  return k == TraceKind::StructureAddModel || k == TraceKind::StructureRemoveModel ||
         k == TraceKind::StructureAddCoupling || k == TraceKind::StructureRemoveCoupling ||
         k == TraceKind::StructurePort;
}

struct TraceRecord {
  SimTime time;
  TraceKind kind = TraceKind::Output;
  std::string model = "/";
  // Canonical key=value pairs; values are already rendered and contain no
  // whitespace outside double quotes.
  std::map<std::string, std::string> payload;

  const std::string* get(const std::string& key) const {
    auto it = payload.find(key);
    return it == payload.end() ? nullptr : &it->second;
  }
  const std::string& at(const std::string& key) const {
    if (auto* v = get(key)) return *v;
    throw UsageError("trace record has no '" + key + "' entry");
  }

  // time<TAB>kind<TAB>model<TAB>k1=v1 k2=v2
  std::string str() const {
    std::string line = time.str();
    line += '\t';
    line += to_string(kind);
    line += '\t';
    line += model;
    line += '\t';
    bool first = true;
    for (const auto& [k, v] : payload) {
      if (!first) line += ' ';
      first = false;
      line += k;
      line += '=';
      line += v;
    }
    return line;
  }

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using TraceLog = std::vector<TraceRecord>;

inline void write_trace(const TraceLog& records, std::ostream& out) {
  for (const auto& r : records) out << r.str() << '\n';
}

inline std::string trace_text(const TraceLog& records) {
  std::ostringstream os;
  write_trace(records, os);
  return os.str();
}

namespace detail {

// Splits a payload on spaces that are outside double quotes.
inline std::vector<std::string> split_payload(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted && c == '\\' && i + 1 < text.size()) {
      cur += c;
      cur += text[++i];
      continue;
    }
    if (c == '"') quoted = !quoted;
    if (c == ' ' && !quoted) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

inline TraceRecord parse_trace_line(std::string_view line, std::size_t line_no) {
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError({line_no, 1}, what);
  };
  std::vector<std::string_view> cols;
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) throw fail("expected 4 tab-separated columns");
    cols.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  cols.push_back(line.substr(pos));

  TraceRecord r;
  auto t = SimTime::parse(cols[0]);
  if (!t) throw fail("bad time '" + std::string(cols[0]) + "'");
  r.time = *t;
  auto kind = parse_trace_kind(cols[1]);
  if (!kind) throw fail("unknown record kind '" + std::string(cols[1]) + "'");
  r.kind = *kind;
  if (cols[2].empty() || cols[2].front() != '/') throw fail("bad model path");
  r.model = std::string(cols[2]);
  for (const auto& item : detail::split_payload(cols[3])) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw fail("bad payload entry '" + item + "'");
    r.payload.emplace(item.substr(0, eq), item.substr(eq + 1));
  }
  return r;
}

inline TraceLog read_trace(std::istream& in) {
  TraceLog out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    out.push_back(parse_trace_line(line, n));
  }
  return out;
}

}  // namespace dsdevs
