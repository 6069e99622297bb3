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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dsdevs/behavior.hpp"
#include "dsdevs/spec.hpp"
#include "dsdevs/structure.hpp"

namespace dsdevs {

// A static problem found in a model specification.
struct SpecIssue {
  enum class Kind {
    InvalidBehavior,
    DuplicateName,
    DanglingCoupling,
    TypeMismatch,
    SelectOrder,
  };

  Kind kind;
  ModelPath scope;                  // coupled model the issue lives in
  std::string component;            // offending component, if any
  std::optional<Coupling> coupling;  // offending coupling, if any
  std::string detail;

  StructureReason reason() const {
    switch (kind) {
      case Kind::DuplicateName: return StructureReason::DuplicateName;
      case Kind::DanglingCoupling: return StructureReason::DanglingCoupling;
      case Kind::TypeMismatch: return StructureReason::TypeMismatch;
      default: return StructureReason::InvalidSpec;
    }
  }

  std::string str() const { return scope.str() + ": " + detail; }
};

// Identifier-like names: no empty names, no '.' (the endpoint separator)
// and no whitespace.
inline bool valid_component_name(std::string_view name) {
  if (name.empty() || name.front() == '/' || name.back() == '/') return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '/';
    if (!ok) return false;
  }
  return true;
}

namespace detail {

inline void check_port_list(const std::vector<PortSpec>& ports, const ModelPath& scope,
                            const std::string& component, std::vector<SpecIssue>& out) {
  std::set<std::pair<std::string, Direction>> seen;
  for (const auto& p : ports) {
    if (!seen.insert({p.name, p.direction}).second) {
      out.push_back({SpecIssue::Kind::DuplicateName, scope, component, std::nullopt,
                     "duplicate " + std::string(to_string(p.direction)) + " port '" + p.name +
                         "'" + (component.empty() ? "" : " on " + component)});
    }
  }
}

inline const PortSpec* find_port(const std::vector<PortSpec>& ports, std::string_view name,
                                 Direction dir) {
  for (const auto& p : ports) {
    if (p.name == name && p.direction == dir) return &p;
  }
  return nullptr;
}

inline void validate_coupled(const CoupledSpec& spec, const Catalog& catalog, bool require_select,
                             const ModelPath& scope, std::vector<SpecIssue>& out) {
  using K = SpecIssue::Kind;
  check_port_list(spec.ports, scope, "", out);

  std::map<std::string, std::vector<PortSpec>> ports;
  for (const auto& comp : spec.components) {
    if (!valid_component_name(comp.name)) {
      out.push_back({K::InvalidBehavior, scope, comp.name, std::nullopt,
                     "invalid component name '" + comp.name + "'"});
    }
    if (ports.count(comp.name)) {
      out.push_back({K::DuplicateName, scope, comp.name, std::nullopt,
                     "duplicate component '" + comp.name + "'"});
      continue;
    }
    if (comp.model.is_atomic()) {
      try {
        ports[comp.name] = catalog.ports_of(comp.model.atomic());
      } catch (const Error& e) {
        out.push_back({K::InvalidBehavior, scope, comp.name, std::nullopt,
                       comp.name + ": " + e.what()});
        ports[comp.name] = {};
        continue;
      }
      check_port_list(ports[comp.name], scope, comp.name, out);
    } else {
      ports[comp.name] = comp.model.coupled().ports;
      validate_coupled(comp.model.coupled(), catalog, require_select, scope.child(comp.name), out);
    }
  }

  for (const auto& c : spec.couplings) {
    if (c.from.is_network() && c.to.is_network()) {
      out.push_back({K::DanglingCoupling, scope, "", c,
                     "network input coupled directly to network output: " + c.str()});
      continue;
    }
    if (!c.from.is_network() && c.from.component == c.to.component && c.from.port == c.to.port) {
      out.push_back({K::DanglingCoupling, scope, c.from.component, c,
                     "self-coupling between same-named ports: " + c.str()});
      continue;
    }
    auto lookup = [&](const Endpoint& e, bool source) -> const PortSpec* {
      if (e.is_network()) return find_port(spec.ports, e.port, source ? Direction::In : Direction::Out);
      auto it = ports.find(e.component);
      if (it == ports.end()) return nullptr;
      return find_port(it->second, e.port, source ? Direction::Out : Direction::In);
    };
    const PortSpec* src = lookup(c.from, true);
    const PortSpec* dst = lookup(c.to, false);
    if (!src || !dst) {
      out.push_back({K::DanglingCoupling, scope, "", c,
                     "coupling " + c.str() + " references an undeclared " +
                         (!src ? "source" : "destination")});
      continue;
    }
    if (!(src->type == dst->type)) {
      out.push_back({K::TypeMismatch, scope, "", c,
                     "coupling " + c.str() + " joins " + src->type.str() + " to " +
                         dst->type.str()});
    }
  }

  if (spec.select_order.empty()) {
    if (require_select && !spec.components.empty()) {
      out.push_back({K::SelectOrder, scope, "", std::nullopt, "missing select order"});
    }
  } else {
    std::vector<std::string> order = spec.select_order;
    std::vector<std::string> names;
    for (const auto& comp : spec.components) names.push_back(comp.name);
    std::sort(order.begin(), order.end());
    std::sort(names.begin(), names.end());
    if (order != names) {
      out.push_back({K::SelectOrder, scope, "", std::nullopt,
                     "select order must list every component exactly once"});
    }
  }
}

}  // namespace detail

inline std::vector<SpecIssue> validate_spec(const CoupledSpec& spec, const Catalog& catalog,
                                            bool require_select = false,
                                            const ModelPath& scope = ModelPath::root()) {
  std::vector<SpecIssue> out;
  detail::validate_coupled(spec, catalog, require_select, scope, out);
  return out;
}

}  // namespace dsdevs
