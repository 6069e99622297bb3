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
#include <set>
#include <string>
#include <vector>

#include "dsdevs/spec.hpp"

namespace dsdevs {

namespace detail {

class Flattener {
 public:
  explicit Flattener(const CoupledSpec& top) : top_(top) {}

  CoupledSpec run() {
    std::vector<const CoupledSpec*> chain{&top_};
    walk(chain, {}, {});

    for (const auto& c : top_.couplings) {
      if (!c.from.is_network() || c.to.is_network()) continue;
      std::set<Endpoint> reached;
      down(*top_.find(c.to.component), {c.to.component}, c.to.port, reached);
      for (const auto& e : reached) couplings_.insert({{"", c.from.port}, e});
    }

    CoupledSpec out;
    out.ports = top_.ports;
    std::vector<std::pair<std::vector<std::size_t>, std::string>> ranked;
    for (auto& leaf : leaves_) {
      ranked.emplace_back(leaf.priority, leaf.name);
      out.components.push_back({leaf.name, ModelSpec(leaf.spec)});
    }
    std::sort(ranked.begin(), ranked.end());
    for (auto& [prio, name] : ranked) out.select_order.push_back(name);
    out.couplings.assign(couplings_.begin(), couplings_.end());
    return out;
  }

 private:
  struct Leaf {
    std::string name;
    AtomicSpec spec;
    std::vector<std::size_t> priority;
  };

  static std::string join(const std::vector<std::string>& segs) {
    std::string out;
    for (std::size_t i = 0; i < segs.size(); ++i) out += (i ? "/" : "") + segs[i];
    return out;
  }

  static std::size_t rank(const CoupledSpec& scope, const std::string& name) {
    const auto& order = scope.select_order;
    if (!order.empty()) {
      return static_cast<std::size_t>(std::find(order.begin(), order.end(), name) - order.begin());
    }
    for (std::size_t i = 0; i < scope.components.size(); ++i) {
      if (scope.components[i].name == name) return i;
    }
    return scope.components.size();
  }

  void walk(std::vector<const CoupledSpec*>& chain, std::vector<std::string> segs,
            std::vector<std::size_t> prio) {
    const CoupledSpec& scope = *chain.back();
    for (const auto& comp : scope.components) {
      auto s = segs;
      s.push_back(comp.name);
      auto p = prio;
      p.push_back(rank(scope, comp.name));
      if (comp.model.is_atomic()) {
        leaves_.push_back({join(s), comp.model.atomic(), p});
        std::set<std::string> out_ports;
        for (const auto& c : scope.couplings) {
          if (c.from.component == comp.name) out_ports.insert(c.from.port);
        }
        for (const auto& port : out_ports) {
          std::set<Endpoint> reached;
          up(chain, s, chain.size() - 1, comp.name, port, reached);
          for (const auto& e : reached) couplings_.insert({{join(s), port}, e});
        }
      } else {
        chain.push_back(&comp.model.coupled());
        walk(chain, s, p);
        chain.pop_back();
      }
    }
  }

  // Everything an output of `child` in chain[level] reaches. `segs` is the
  // path of the emitting leaf; its first `level` segments name the scopes.
  void up(const std::vector<const CoupledSpec*>& chain, const std::vector<std::string>& segs,
          std::size_t level, const std::string& child, const std::string& port,
          std::set<Endpoint>& out) {
    const CoupledSpec& scope = *chain[level];
    std::vector<std::string> prefix(segs.begin(), segs.begin() + static_cast<std::ptrdiff_t>(level));
    for (const auto& c : scope.couplings) {
      if (!(c.from == Endpoint{child, port})) continue;
      if (c.to.is_network()) {
        if (level == 0) {
          out.insert({"", c.to.port});
        } else {
          up(chain, segs, level - 1, segs[level - 1], c.to.port, out);
        }
        continue;
      }
      const Component* target = scope.find(c.to.component);
      if (!target) continue;
      auto p = prefix;
      p.push_back(target->name);
      down(*target, p, c.to.port, out);
    }
  }

  void down(const Component& comp, const std::vector<std::string>& segs, const std::string& port,
            std::set<Endpoint>& out) {
    if (comp.model.is_atomic()) {
      out.insert({join(segs), port});
      return;
    }
    const CoupledSpec& scope = comp.model.coupled();
    for (const auto& c : scope.couplings) {
      if (!(c.from == Endpoint{"", port}) || c.to.is_network()) continue;
      const Component* target = scope.find(c.to.component);
      if (!target) continue;
      auto s = segs;
      s.push_back(target->name);
      down(*target, s, c.to.port, out);
    }
  }

  const CoupledSpec& top_;
  std::vector<Leaf> leaves_;
  std::set<Coupling> couplings_;
};

}  // namespace detail

// Rewrites a hierarchy into one level. Atomic components keep their specs
// and are named by their "/"-joined paths; couplings are composed through
// every intermediate coupled-model port. The select order ranks atomics
// lexicographically by their per-level priorities.
inline CoupledSpec flatten(const CoupledSpec& spec) { return detail::Flattener(spec).run(); }

}  // namespace dsdevs
