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
#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsdevs/message.hpp"
#include "dsdevs/value.hpp"

namespace dsdevs {

// One side of a coupling. An empty component names the enclosing network.
struct Endpoint {
  std::string component;
  std::string port;

  bool is_network() const { return component.empty(); }
  std::string str() const { return component.empty() ? port : component + "." + port; }

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

enum class CouplingKind { ExternalInput, ExternalOutput, Internal };

inline std::string_view to_string(CouplingKind k) {
  switch (k) {
    case CouplingKind::ExternalInput: return "eic";
    case CouplingKind::ExternalOutput: return "eoc";
    case CouplingKind::Internal: return "ic";
  }
  return "?";
}

struct Coupling {
  Endpoint from;
  Endpoint to;

  // Network-to-network couplings have no kind; validation rejects them.
  CouplingKind kind() const {
    if (from.is_network()) return CouplingKind::ExternalInput;
    if (to.is_network()) return CouplingKind::ExternalOutput;
    return CouplingKind::Internal;
  }
  bool touches(const std::string& component) const {
    return from.component == component || to.component == component;
  }
  std::string str() const { return from.str() + "->" + to.str(); }

  friend bool operator==(const Coupling&, const Coupling&) = default;
  friend auto operator<=>(const Coupling&, const Coupling&) = default;
};

// Declarative atomic: a catalog behavior plus parameters. Ports default to
// what the behavior factory declares for these parameters; `ports`, when
// present, replaces that list entirely.
struct AtomicSpec {
  std::string behavior;
  Value params = Value::record({});
  std::optional<std::vector<PortSpec>> ports;

  friend bool operator==(const AtomicSpec&, const AtomicSpec&) = default;
};

struct Component;

struct CoupledSpec {
  std::vector<PortSpec> ports;
  std::vector<Component> components;
  std::vector<Coupling> couplings;        // sorted, unique
  std::vector<std::string> select_order;  // highest priority first

  const Component* find(std::string_view name) const;
  Component* find(std::string_view name);

  const PortSpec* port(std::string_view name, Direction dir) const {
    for (const auto& p : ports) {
      if (p.name == name && p.direction == dir) return &p;
    }
    return nullptr;
  }

  // Inserts keeping the canonical order; returns false when already present.
  bool add_coupling(Coupling c) {
    auto it = std::lower_bound(couplings.begin(), couplings.end(), c);
    if (it != couplings.end() && *it == c) return false;
    couplings.insert(it, std::move(c));
    return true;
  }

  bool remove_coupling(const Coupling& c) {
    auto it = std::lower_bound(couplings.begin(), couplings.end(), c);
    if (it == couplings.end() || !(*it == c)) return false;
    couplings.erase(it);
    return true;
  }

  friend bool operator==(const CoupledSpec&, const CoupledSpec&);
};

struct ModelSpec {
  std::variant<AtomicSpec, CoupledSpec> node;

  ModelSpec() = default;
  ModelSpec(AtomicSpec a) : node(std::move(a)) {}
  ModelSpec(CoupledSpec c) : node(std::move(c)) {}

  bool is_atomic() const { return std::holds_alternative<AtomicSpec>(node); }
  bool is_coupled() const { return std::holds_alternative<CoupledSpec>(node); }
  const AtomicSpec& atomic() const { return std::get<AtomicSpec>(node); }
  AtomicSpec& atomic() { return std::get<AtomicSpec>(node); }
  const CoupledSpec& coupled() const { return std::get<CoupledSpec>(node); }
  CoupledSpec& coupled() { return std::get<CoupledSpec>(node); }

  friend bool operator==(const ModelSpec& a, const ModelSpec& b) { return a.node == b.node; }
};

struct Component {
  std::string name;
  ModelSpec model;

  friend bool operator==(const Component& a, const Component& b) {
    return a.name == b.name && a.model == b.model;
  }
};

inline const Component* CoupledSpec::find(std::string_view name) const {
  for (const auto& c : components) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

inline Component* CoupledSpec::find(std::string_view name) {
  for (auto& c : components) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

inline bool operator==(const CoupledSpec& a, const CoupledSpec& b) {
  return a.ports == b.ports && a.components == b.components && a.couplings == b.couplings &&
         a.select_order == b.select_order;
}

// Number of atomic models reachable from `spec`.
inline std::size_t count_atomics(const ModelSpec& spec) {
  if (spec.is_atomic()) return 1;
  std::size_t n = 0;
  for (const auto& c : spec.coupled().components) n += count_atomics(c.model);
  return n;
}

}  // namespace dsdevs
