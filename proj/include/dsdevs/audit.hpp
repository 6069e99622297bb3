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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dsdevs/error.hpp"
#include "dsdevs/trace.hpp"

namespace dsdevs {

// The component tree and coupling sets as recorded in a trace.
struct StructureState {
  struct Model {
    std::string type;      // atomic | coupled
    std::string behavior;  // atomic only
    std::set<std::string> ports;  // "dir:name:type"
  };

  std::map<std::string, Model> models;                         // by path
  std::set<std::pair<std::string, std::string>> couplings;     // (scope, "a.out->b.in")

  friend bool operator==(const StructureState& a, const StructureState& b) {
    if (a.couplings != b.couplings || a.models.size() != b.models.size()) return false;
    for (const auto& [path, m] : a.models) {
      auto it = b.models.find(path);
      if (it == b.models.end() || it->second.type != m.type ||
          it->second.behavior != m.behavior || it->second.ports != m.ports) {
        return false;
      }
    }
    return true;
  }

  // One line per model, then one per coupling, in path order.
  std::string str() const {
    std::string out;
    for (const auto& [path, m] : models) {
      std::string ports;
      for (const auto& p : m.ports) ports += (ports.empty() ? "" : ",") + p;
      out += "model " + path + " " + m.type;
      if (!m.behavior.empty()) out += " " + m.behavior;
      out += " ports=" + (ports.empty() ? std::string("-") : ports) + "\n";
    }
    for (const auto& [scope, c] : couplings) out += "coupling " + scope + " " + c + "\n";
    return out;
  }
};

// Structure over time: epoch 0 is the initial structure, each later epoch
// starts at a time where at least one structure record was written.
struct StructureHistory {
  struct Epoch {
    SimTime start;
    StructureState state;
  };
  std::vector<Epoch> epochs;

  const StructureState& at(SimTime t) const {
    if (epochs.empty()) throw UsageError("empty structure history");
    const Epoch* found = &epochs.front();
    for (const auto& e : epochs) {
      if (e.start <= t) found = &e;
    }
    return found->state;
  }
};

namespace detail {

inline std::set<std::string> split_ports(const std::string& text) {
  std::set<std::string> out;
  if (text == "-" || text.empty()) return out;
  // Record types carry commas inside braces.
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.insert(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.insert(cur);
  return out;
}

inline bool is_within(const std::string& path, const std::string& ancestor) {
  if (ancestor == "/") return true;
  return path == ancestor || path.rfind(ancestor + "/", 0) == 0;
}

inline StructureState::Model model_from(const TraceRecord& r) {
  StructureState::Model m;
  auto field = [&](const char* k) { return r.get(k) ? *r.get(k) : std::string(); };
  m.type = field("type");
  m.behavior = field("behavior");
  m.ports = split_ports(field("ports"));
  return m;
}

inline void apply_record(StructureState& s, const TraceRecord& r) {
  switch (r.kind) {
    case TraceKind::StructureAddModel:
      s.models[r.model] = model_from(r);
      break;
    case TraceKind::StructureRemoveModel: {
      for (auto it = s.models.begin(); it != s.models.end();) {
        it = is_within(it->first, r.model) ? s.models.erase(it) : std::next(it);
      }
      for (auto it = s.couplings.begin(); it != s.couplings.end();) {
        it = is_within(it->first, r.model) ? s.couplings.erase(it) : std::next(it);
      }
      break;
    }
    case TraceKind::StructureAddCoupling:
      s.couplings.insert({r.model, r.at("coupling")});
      break;
    case TraceKind::StructureRemoveCoupling:
      s.couplings.erase({r.model, r.at("coupling")});
      break;
    case TraceKind::StructurePort: {
      auto it = s.models.find(r.model);
      if (it == s.models.end()) {
        throw ParseError({}, "port change on unknown model " + r.model);
      }
      auto& ports = it->second.ports;
      const std::string prefix = r.at("direction") + ":" + r.at("name") + ":";
      std::erase_if(ports, [&](const std::string& p) { return p.rfind(prefix, 0) == 0; });
      if (r.at("action") != "remove") ports.insert(prefix + r.at("type"));
      break;
    }
    default:
      break;
  }
}

}  // namespace detail

// Rebuilds the structure history from init and structure records.
inline StructureHistory structure_audit(const TraceLog& trace) {
  StructureHistory h;
  StructureState state;
  bool initialised = false;
  SimTime start;
  for (const auto& r : trace) {
    if (r.kind == TraceKind::Init) {
      if (!initialised) start = r.time;
      initialised = true;
      if (r.payload.count("coupling")) {
        state.couplings.insert({r.model, r.at("coupling")});
      } else {
        state.models[r.model] = detail::model_from(r);
      }
      continue;
    }
    if (!is_structure(r.kind)) continue;
    if (!initialised) throw ParseError({}, "structure record before the initial structure");
    if (h.epochs.empty()) h.epochs.push_back({start, state});
    if (h.epochs.back().start != r.time) h.epochs.push_back({r.time, h.epochs.back().state});
    detail::apply_record(h.epochs.back().state, r);
  }
  if (!initialised) throw ParseError({}, "trace has no init records");
  if (h.epochs.empty()) h.epochs.push_back({start, state});
  return h;
}

}  // namespace dsdevs
