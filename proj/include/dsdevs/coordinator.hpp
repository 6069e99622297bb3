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
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dsdevs/atomic.hpp"
#include "dsdevs/behavior.hpp"
#include "dsdevs/error.hpp"
#include "dsdevs/spec.hpp"

namespace dsdevs {

// Drives a coupled model. Owns its children, the coupling set and the
// select order; t_next is the minimum over the children.
class Coordinator : public Processor {
 public:
  using Children = std::map<std::string, std::unique_ptr<Processor>>;

  Coordinator(std::string name, std::vector<PortSpec> ports)
      : Processor(std::move(name), std::move(ports)) {}

  bool is_atomic() const override { return false; }

  const Children& children() const { return children_; }

  Processor* child(std::string_view name) const {
    auto it = children_.find(std::string(name));
    return it == children_.end() ? nullptr : it->second.get();
  }

  // Appends to the select order (lowest priority) unless already listed.
  void add_child(std::string name, std::unique_ptr<Processor> p) {
    if (children_.count(name)) throw UsageError("duplicate component '" + name + "'");
    p->attach(this, name);
    if (std::find(select_order_.begin(), select_order_.end(), name) == select_order_.end()) {
      select_order_.push_back(name);
    }
    children_.emplace(std::move(name), std::move(p));
  }

  // Detaches a child. Couplings that mention it are left to the caller.
  std::unique_ptr<Processor> remove_child(const std::string& name, bool keep_priority = false) {
    auto it = children_.find(name);
    if (it == children_.end()) throw UsageError("no component '" + name + "'");
    auto p = std::move(it->second);
    children_.erase(it);
    if (!keep_priority) std::erase(select_order_, name);
    p->attach(nullptr, p->name());
    return p;
  }

  const std::vector<Coupling>& couplings() const { return couplings_; }

  bool has_coupling(const Coupling& c) const {
    return std::binary_search(couplings_.begin(), couplings_.end(), c);
  }
  bool add_coupling(Coupling c) {
    auto it = std::lower_bound(couplings_.begin(), couplings_.end(), c);
    if (it != couplings_.end() && *it == c) return false;
    couplings_.insert(it, std::move(c));
    return true;
  }
  bool remove_coupling(const Coupling& c) {
    auto it = std::lower_bound(couplings_.begin(), couplings_.end(), c);
    if (it == couplings_.end() || !(*it == c)) return false;
    couplings_.erase(it);
    return true;
  }

  // Couplings whose source is `from`, in canonical order.
  std::vector<const Coupling*> couplings_from(const Endpoint& from) const {
    std::vector<const Coupling*> out;
    auto it = std::lower_bound(couplings_.begin(), couplings_.end(), from,
                               [](const Coupling& c, const Endpoint& e) { return c.from < e; });
    for (; it != couplings_.end() && it->from == from; ++it) out.push_back(&*it);
    return out;
  }

  const std::vector<std::string>& select_order() const { return select_order_; }
  void set_select_order(std::vector<std::string> order) { select_order_ = std::move(order); }

  void init(SimTime t) {
    for (auto& [n, c] : children_) {
      if (c->is_atomic()) {
        static_cast<AtomicProcessor&>(*c).init(t);
      } else {
        static_cast<Coordinator&>(*c).init(t);
      }
    }
    refresh_local();
    t_last_ = t;
  }

  // Recomputes t_last/t_next from the children, without recursion.
  void refresh_local() {
    SimTime next = SimTime::infinity();
    SimTime last = SimTime::zero();
    for (const auto& [n, c] : children_) {
      if (c->t_next() < next) next = c->t_next();
      if (c->t_last() > last) last = c->t_last();
    }
    t_next_ = next;
    if (!children_.empty()) t_last_ = last;
  }

  // Bottom-up recomputation over the whole subtree.
  void refresh() {
    for (auto& [n, c] : children_) {
      if (!c->is_atomic()) static_cast<Coordinator&>(*c).refresh();
    }
    refresh_local();
  }

  // Children whose next event is this coordinator's next event.
  std::vector<std::string> imminent_set() const {
    std::vector<std::string> out;
    if (t_next_.is_infinite()) return out;
    for (const auto& [n, c] : children_) {
      if (c->t_next() == t_next_) out.push_back(n);
    }
    return out;
  }

  ModelSpec to_spec() const override {
    CoupledSpec spec;
    spec.ports = ports_;
    for (const auto& [n, c] : children_) spec.components.push_back({n, c->to_spec()});
    spec.couplings = couplings_;
    spec.select_order = select_order_;
    return ModelSpec(std::move(spec));
  }

  // Mutation guard: while held, the structure engine refuses to touch the tree.
  bool locked() const { return lock_depth_ > 0; }
  void lock() { ++lock_depth_; }
  void unlock() { --lock_depth_; }

 private:
  Children children_;
  std::vector<Coupling> couplings_;
  std::vector<std::string> select_order_;
  int lock_depth_ = 0;
};

inline ModelPath Processor::path() const {
  std::vector<std::string> segs;
  for (const Processor* p = this; p->parent_; p = p->parent_) segs.push_back(p->name_);
  std::reverse(segs.begin(), segs.end());
  return ModelPath(std::move(segs));
}

class ScopedLock {
 public:
  explicit ScopedLock(Coordinator& c) : c_(c) { c_.lock(); }
  ~ScopedLock() { c_.unlock(); }
  ScopedLock(const ScopedLock&) = delete;
  ScopedLock& operator=(const ScopedLock&) = delete;

 private:
  Coordinator& c_;
};

// Resolves a path from `root`. Segments may also match a flattened child
// whose name itself contains '/'.
inline Processor* resolve(const Coordinator& root, const ModelPath& path) {
  if (path.is_root()) return const_cast<Coordinator*>(&root);
  const auto& segs = path.segments();
  const Coordinator* scope = &root;
  std::size_t i = 0;
  while (i < segs.size()) {
    Processor* found = nullptr;
    std::string name;
    std::size_t used = 0;
    for (std::size_t j = i; j < segs.size(); ++j) {
      name += (j == i ? "" : "/") + segs[j];
      if (Processor* p = scope->child(name)) {
        found = p;
        used = j - i + 1;
        break;
      }
    }
    if (!found) return nullptr;
    i += used;
    if (i == segs.size()) return found;
    if (found->is_atomic()) return nullptr;
    scope = static_cast<const Coordinator*>(found);
  }
  return nullptr;
}

inline Coordinator* resolve_coupled(const Coordinator& root, const ModelPath& path) {
  Processor* p = resolve(root, path);
  if (!p || p->is_atomic()) return nullptr;
  return static_cast<Coordinator*>(p);
}

// Builds the runtime tree for a specification. Processors are not
// initialized; call init() on the result.
inline std::unique_ptr<Processor> build_processor(const std::string& name, const ModelSpec& spec,
                                                  const Catalog& catalog,
                                                  KernelOptions options = {}) {
  if (spec.is_atomic()) {
    const auto& a = spec.atomic();
    return std::make_unique<AtomicProcessor>(name, a, catalog.instantiate(a), options);
  }
  const auto& c = spec.coupled();
  auto coord = std::make_unique<Coordinator>(name, c.ports);
  for (const auto& comp : c.components) {
    coord->add_child(comp.name, build_processor(comp.name, comp.model, catalog, options));
  }
  for (const auto& cp : c.couplings) coord->add_coupling(cp);
  if (!c.select_order.empty()) coord->set_select_order(c.select_order);
  return coord;
}

inline std::unique_ptr<Coordinator> build_root(const CoupledSpec& spec, const Catalog& catalog,
                                               KernelOptions options = {}) {
  auto p = build_processor("", ModelSpec(spec), catalog, options);
  return std::unique_ptr<Coordinator>(static_cast<Coordinator*>(p.release()));
}

// Calls `fn` on every processor of the subtree in path order (pre-order).
template <typename Fn>
void for_each_processor(const Processor& p, Fn&& fn) {
  fn(p);
  if (p.is_atomic()) return;
  for (const auto& [n, c] : static_cast<const Coordinator&>(p).children()) {
    for_each_processor(*c, fn);
  }
}

// Atomics of the subtree sorted by rendered path.
inline std::vector<AtomicProcessor*> atomics_of(const Processor& root) {
  std::vector<std::pair<std::string, AtomicProcessor*>> keyed;
  for_each_processor(root, [&](const Processor& p) {
    if (p.is_atomic()) {
      keyed.emplace_back(p.path().str(),
                         const_cast<AtomicProcessor*>(static_cast<const AtomicProcessor*>(&p)));
    }
  });
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<AtomicProcessor*> out;
  for (auto& [k, a] : keyed) out.push_back(a);
  return out;
}

// ---------------------------------------------------------------------------
// Message routing through the hierarchy.

struct Delivery {
  AtomicProcessor* target = nullptr;
  std::string port;
};

// Where one emitted message ends up. A message reaching the same atomic
// input (or the same root output) along several coupling paths arrives once,
// matching the set semantics of the flattened coupling relation.
struct RouteResult {
  std::vector<Delivery> deliveries;
  std::vector<std::string> root_outputs;

  bool dead_end() const { return deliveries.empty() && root_outputs.empty(); }
};

namespace detail {

class Router {
 public:
  void up(const Coordinator& scope, const std::string& child, const std::string& port) {
    for (const Coupling* c : scope.couplings_from(Endpoint{child, port})) {
      if (c->to.is_network()) {
        if (!scope.port(c->to.port, Direction::Out)) {
          throw RoutingError("coupling " + c->str() + " in " + scope.path().str() +
                             " targets undeclared output port");
        }
        if (scope.parent()) {
          up(*scope.parent(), scope.name(), c->to.port);
        } else if (seen_root_.insert(c->to.port).second) {
          result_.root_outputs.push_back(c->to.port);
        }
      } else {
        Processor* target = scope.child(c->to.component);
        if (!target) {
          throw RoutingError("coupling " + c->str() + " in " + scope.path().str() +
                             " names a missing component");
        }
        down(*target, c->to.port);
      }
    }
  }

  void down(Processor& target, const std::string& port) {
    if (!target.port(port, Direction::In)) {
      throw RoutingError("message routed to undeclared input port " + target.path().str() + "." +
                         port);
    }
    if (target.is_atomic()) {
      auto* a = static_cast<AtomicProcessor*>(&target);
      if (seen_.insert({a, port}).second) result_.deliveries.push_back({a, port});
      return;
    }
    auto& coord = static_cast<Coordinator&>(target);
    for (const Coupling* c : coord.couplings_from(Endpoint{"", port})) {
      if (c->to.is_network()) continue;  // rejected by validation
      Processor* next = coord.child(c->to.component);
      if (!next) {
        throw RoutingError("coupling " + c->str() + " in " + coord.path().str() +
                           " names a missing component");
      }
      down(*next, c->to.port);
    }
  }

  RouteResult take() { return std::move(result_); }

 private:
  RouteResult result_;
  std::set<std::pair<const AtomicProcessor*, std::string>> seen_;
  std::set<std::string> seen_root_;
};

}  // namespace detail

inline RouteResult route_emission(const AtomicProcessor& source, const Message& msg) {
  detail::Router router;
  if (source.parent()) router.up(*source.parent(), source.name(), msg.port);
  return router.take();
}

// ---------------------------------------------------------------------------
// Structural well-formedness of a live tree.

namespace detail {

inline const PortSpec* endpoint_port(const Coordinator& scope, const Endpoint& e, bool source) {
  if (e.is_network()) {
    return scope.port(e.port, source ? Direction::In : Direction::Out);
  }
  const Processor* p = scope.child(e.component);
  if (!p) return nullptr;
  return p->port(e.port, source ? Direction::Out : Direction::In);
}

}  // namespace detail

// Lists every violated invariant (dangling or mistyped couplings, select
// order not matching the children). Empty when the tree is well formed.
inline std::vector<std::string> check_well_formed(const Coordinator& root) {
  std::vector<std::string> issues;
  for_each_processor(root, [&](const Processor& p) {
    if (p.is_atomic()) return;
    const auto& c = static_cast<const Coordinator&>(p);
    const std::string where = c.path().str();
    for (const auto& cp : c.couplings()) {
      if (cp.from.is_network() && cp.to.is_network()) {
        issues.push_back(where + ": network input coupled directly to network output " + cp.str());
        continue;
      }
      const PortSpec* src = detail::endpoint_port(c, cp.from, true);
      const PortSpec* dst = detail::endpoint_port(c, cp.to, false);
      if (!src || !dst) {
        issues.push_back(where + ": dangling coupling " + cp.str());
        continue;
      }
      if (!(src->type == dst->type)) {
        issues.push_back(where + ": coupling " + cp.str() + " joins " + src->type.str() +
                         " to " + dst->type.str());
      }
    }
    std::vector<std::string> order = c.select_order();
    std::vector<std::string> names;
    for (const auto& [n, ch] : c.children()) names.push_back(n);
    std::sort(order.begin(), order.end());
    if (order != names) issues.push_back(where + ": select order does not match components");
  });
  return issues;
}

}  // namespace dsdevs
