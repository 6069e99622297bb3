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
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsdevs/coordinator.hpp"
#include "dsdevs/structure.hpp"
#include "dsdevs/trace.hpp"
#include "dsdevs/validate.hpp"

namespace dsdevs {

// ---------------------------------------------------------------------------
// Rendering helpers shared by init and structure records.

inline std::string render_ports(const std::vector<PortSpec>& ports) {
  if (ports.empty()) return "-";
  std::vector<std::string> parts;
  for (const auto& p : ports) {
    parts.push_back(std::string(to_string(p.direction)) + ":" + p.name + ":" + p.type.str());
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

// Single-line canonical form of a specification, used for digests.
inline std::string canonical_text(const ModelSpec& spec) {
  if (spec.is_atomic()) {
    const auto& a = spec.atomic();
    std::string out = "atomic(" + a.behavior + "," + a.params.str();
    if (a.ports) out += ",ports=" + render_ports(*a.ports);
    return out + ")";
  }
  const auto& c = spec.coupled();
  std::string out = "coupled(ports=" + render_ports(c.ports) + ";";
  for (const auto& comp : c.components) out += comp.name + "=" + canonical_text(comp.model) + ";";
  for (const auto& cp : c.couplings) out += cp.str() + ";";
  out += "select=";
  for (const auto& s : c.select_order) out += s + ",";
  return out + ")";
}

// FNV-1a, 64 bit, rendered as 16 hex digits.
inline std::string spec_digest(const ModelSpec& spec) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text(spec)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Payload describing one model; used by init and add records.
inline std::map<std::string, std::string> describe_model(const Processor& p) {
  std::map<std::string, std::string> out;
  out["parent"] = p.parent() ? p.parent()->path().str() : "-";
  out["ports"] = render_ports(p.ports());
  if (p.is_atomic()) {
    const auto& a = static_cast<const AtomicProcessor&>(p);
    out["type"] = "atomic";
    out["behavior"] = a.to_spec().atomic().behavior;
    out["t_next"] = a.t_next().str();
  } else {
    out["type"] = "coupled";
  }
  out["digest"] = spec_digest(p.to_spec());
  return out;
}

// ---------------------------------------------------------------------------
// Context snapshots.

inline ContextSnapshot snapshot_context(const Coordinator& root, const ModelPath& parent,
                                        SimTime t) {
  const Coordinator* scope = resolve_coupled(root, parent);
  if (!scope) {
    throw StructureError({StructureReason::UnknownPath, "no coupled model at " + parent.str()});
  }
  ContextSnapshot snap{t, parent, {}};
  for (const auto& [name, c] : scope->children()) {
    ContextSnapshot::Sibling s{name, c->t_next(), Value::record({})};
    if (c->is_atomic()) {
      const auto& a = static_cast<const AtomicProcessor&>(*c);
      s.observables = a.behavior().observables(a.state());
    }
    snap.siblings.push_back(std::move(s));
  }
  return snap;
}

// ---------------------------------------------------------------------------
// Validation of single requests against the current tree.

namespace detail {

inline std::optional<StructureIssue> check_new_spec(const std::string& name, const ModelSpec& spec,
                                                    const InitDirective& init,
                                                    const Catalog& catalog) {
  if (!valid_component_name(name)) {
    return StructureIssue{StructureReason::InvalidSpec, "invalid component name '" + name + "'"};
  }
  if (spec.is_atomic()) {
    try {
      auto inst = catalog.instantiate(spec.atomic());
      std::set<std::pair<std::string, Direction>> seen;
      for (const auto& p : inst.ports) {
        if (!seen.insert({p.name, p.direction}).second) {
          return StructureIssue{StructureReason::DuplicateName,
                                name + ": duplicate port '" + p.name + "'"};
        }
      }
    } catch (const Error& e) {
      return StructureIssue{StructureReason::InvalidSpec, name + ": " + e.what()};
    }
    if (auto* c = std::get_if<InitDirective::Contextual>(&init.mode)) {
      if (!catalog.has_initializer(c->initializer)) {
        return StructureIssue{StructureReason::InvalidSpec,
                              "unknown initializer '" + c->initializer + "'"};
      }
    }
    return std::nullopt;
  }
  if (!std::holds_alternative<InitDirective::Default>(init.mode)) {
    return StructureIssue{StructureReason::InvalidSpec,
                          "coupled models take no initialization directive"};
  }
  auto issues = validate_spec(spec.coupled(), catalog);
  if (!issues.empty()) return StructureIssue{issues.front().reason(), issues.front().str()};
  return std::nullopt;
}

// Couplings of `scope`'s parent and of `scope` itself that use a port.
inline std::vector<std::pair<const Coordinator*, Coupling>> couplings_using_port(
    const Processor& target, const std::string& port, Direction dir) {
  std::vector<std::pair<const Coordinator*, Coupling>> out;
  if (const Coordinator* parent = target.parent()) {
    for (const auto& c : parent->couplings()) {
      const Endpoint& e = dir == Direction::Out ? c.from : c.to;
      if (e.component == target.name() && e.port == port) out.push_back({parent, c});
    }
  }
  if (!target.is_atomic()) {
    const auto& self = static_cast<const Coordinator&>(target);
    for (const auto& c : self.couplings()) {
      const Endpoint& e = dir == Direction::In ? c.from : c.to;
      if (e.is_network() && e.port == port) out.push_back({&self, c});
    }
  }
  return out;
}

inline std::optional<StructureIssue> check_coupling(const Coordinator& scope, const Coupling& c) {
  if (c.from.is_network() && c.to.is_network()) {
    return StructureIssue{StructureReason::DanglingCoupling,
                          "network input cannot couple to network output: " + c.str()};
  }
  if (!c.from.is_network() && c.from.component == c.to.component && c.from.port == c.to.port) {
    return StructureIssue{StructureReason::DanglingCoupling,
                          "self-coupling between same-named ports: " + c.str()};
  }
  const PortSpec* src = endpoint_port(scope, c.from, true);
  const PortSpec* dst = endpoint_port(scope, c.to, false);
  if (!src || !dst) {
    return StructureIssue{StructureReason::DanglingCoupling,
                          "coupling " + c.str() + " in " + scope.path().str() +
                              " references an undeclared port or component"};
  }
  if (!(src->type == dst->type)) {
    return StructureIssue{StructureReason::TypeMismatch, "coupling " + c.str() + " joins " +
                                                             src->type.str() + " to " +
                                                             dst->type.str()};
  }
  return std::nullopt;
}

}  // namespace detail

// Checks one request against the current structure and the policy.
inline std::optional<StructureIssue> validate_change(const StructureChangeRequest& req,
                                                     const Coordinator& root,
                                                     const ChangePolicy& policy,
                                                     const Catalog& catalog) {
  using R = StructureReason;
  if (policy.authority == Authority::ExecutiveOnly && !(req.requester == policy.executive)) {
    return StructureIssue{R::AuthorityDenied, req.requester.str() +
                                                  " may not change structure; executive is " +
                                                  policy.executive.str()};
  }
  auto unknown = [](const ModelPath& p) {
    return StructureIssue{R::UnknownPath, "no model at " + p.str()};
  };

  return std::visit(
      [&](const auto& ch) -> std::optional<StructureIssue> {
        using T = std::decay_t<decltype(ch)>;
        if constexpr (std::is_same_v<T, change::AddModel>) {
          const Coordinator* parent = resolve_coupled(root, ch.parent);
          if (!parent) return unknown(ch.parent);
          if (parent->child(ch.name)) {
            return StructureIssue{R::DuplicateName,
                                  "'" + ch.name + "' already exists in " + ch.parent.str()};
          }
          return detail::check_new_spec(ch.name, ch.spec, ch.init, catalog);
        } else if constexpr (std::is_same_v<T, change::RemoveModel>) {
          if (ch.target.is_root() || !resolve(root, ch.target)) return unknown(ch.target);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, change::AddCoupling>) {
          const Coordinator* scope = resolve_coupled(root, ch.scope);
          if (!scope) return unknown(ch.scope);
          if (scope->has_coupling(ch.coupling)) {
            return StructureIssue{R::DuplicateName, "coupling " + ch.coupling.str() +
                                                        " already exists in " + ch.scope.str()};
          }
          return detail::check_coupling(*scope, ch.coupling);
        } else if constexpr (std::is_same_v<T, change::RemoveCoupling>) {
          const Coordinator* scope = resolve_coupled(root, ch.scope);
          if (!scope) return unknown(ch.scope);
          if (!scope->has_coupling(ch.coupling)) {
            return StructureIssue{R::DanglingCoupling,
                                  "no coupling " + ch.coupling.str() + " in " + ch.scope.str()};
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, change::AddPort>) {
          const Processor* target = resolve(root, ch.target);
          if (!target) return unknown(ch.target);
          if (ch.port.name.empty()) return StructureIssue{R::InvalidSpec, "empty port name"};
          if (target->port(ch.port.name, ch.port.direction)) {
            return StructureIssue{R::DuplicateName, ch.target.str() + " already has " +
                                                        std::string(to_string(ch.port.direction)) +
                                                        " port '" + ch.port.name + "'"};
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, change::RemovePort>) {
          const Processor* target = resolve(root, ch.target);
          if (!target) return unknown(ch.target);
          if (!target->port(ch.name, ch.direction)) {
            return StructureIssue{R::UnknownPath, ch.target.str() + " has no " +
                                                      std::string(to_string(ch.direction)) +
                                                      " port '" + ch.name + "'"};
          }
          auto used = detail::couplings_using_port(*target, ch.name, ch.direction);
          if (!used.empty()) {
            return StructureIssue{R::PortInUse, "port '" + ch.name + "' of " + ch.target.str() +
                                                    " is used by " + used.front().second.str()};
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, change::RetypePort>) {
          const Processor* target = resolve(root, ch.target);
          if (!target) return unknown(ch.target);
          if (!target->port(ch.name, ch.direction)) {
            return StructureIssue{R::UnknownPath, ch.target.str() + " has no " +
                                                      std::string(to_string(ch.direction)) +
                                                      " port '" + ch.name + "'"};
          }
          for (const auto& [scope, c] : detail::couplings_using_port(*target, ch.name, ch.direction)) {
            // The far end is the side of the coupling that is not this port.
            bool target_is_source = (scope == target->parent()) == (ch.direction == Direction::Out);
            const Endpoint& far = target_is_source ? c.to : c.from;
            const PortSpec* other = detail::endpoint_port(*scope, far, !target_is_source);
            if (other && !(other->type == ch.type)) {
              return StructureIssue{R::TypeMismatch, "retyping '" + ch.name + "' to " +
                                                         ch.type.str() + " breaks " + c.str()};
            }
          }
          return std::nullopt;
        } else {
          static_assert(std::is_same_v<T, change::ReplaceModel>);
          if (ch.target.is_root()) return unknown(ch.target);
          const Processor* target = resolve(root, ch.target);
          if (!target) return unknown(ch.target);
          return detail::check_new_spec(target->name(), ch.spec, ch.init, catalog);
        }
      },
      req.change);
}

// ---------------------------------------------------------------------------
// Batch application.

struct StructureContext {
  const Catalog& catalog;
  ChangePolicy policy;
  KernelOptions options;
};

struct RejectedChange {
  StructureChangeRequest request;
  StructureIssue issue;
};

struct BatchResult {
  TraceLog records;
  std::vector<RejectedChange> rejected;
};

// Orders requests canonically: requester path, then sequence number.
inline void sort_requests(std::vector<StructureChangeRequest>& requests) {
  std::stable_sort(requests.begin(), requests.end(),
                   [](const StructureChangeRequest& a, const StructureChangeRequest& b) {
                     auto ka = a.requester.str();
                     auto kb = b.requester.str();
                     if (ka != kb) return ka < kb;
                     return a.seq < b.seq;
                   });
}

namespace detail {

class BatchApplier {
 public:
  BatchApplier(Coordinator& root, SimTime t, const StructureContext& ctx)
      : root_(root), t_(t), ctx_(ctx) {}

  void take_snapshots(const std::vector<StructureChangeRequest>& requests) {
    for (const auto& r : requests) {
      std::optional<ModelPath> parent;
      if (auto* a = std::get_if<change::AddModel>(&r.change)) parent = a->parent;
      if (auto* rp = std::get_if<change::ReplaceModel>(&r.change)) {
        if (!rp->target.is_root()) parent = rp->target.parent();
      }
      if (!parent) continue;
      const Coordinator* scope = resolve_coupled(root_, *parent);
      if (!scope) continue;
      auto key = scope->path().str();
      if (!snapshots_.count(key)) snapshots_.emplace(key, snapshot_context(root_, *parent, t_));
    }
  }

  void apply(const StructureChangeRequest& req) {
    req_ = &req;
    std::visit([&](const auto& ch) { apply_one(ch); }, req.change);
  }

  TraceLog take_records() { return std::move(records_); }

 private:
  TraceRecord record(TraceKind kind, const std::string& model,
                     std::map<std::string, std::string> payload = {}) {
    TraceRecord r{t_, kind, model, std::move(payload)};
    r.payload["requester"] = req_->requester.str();
    r.payload["seq"] = std::to_string(req_->seq);
    return r;
  }

  std::unique_ptr<Processor> make(const std::string& name, const ModelSpec& spec,
                                  const InitDirective& init, const Coordinator& parent) {
    auto proc = build_processor(name, spec, ctx_.catalog, ctx_.options);
    if (proc->is_atomic()) {
      auto& a = static_cast<AtomicProcessor&>(*proc);
      a.attach(const_cast<Coordinator*>(&parent), name);  // path() for diagnostics
      if (auto* s = std::get_if<InitDirective::Static>(&init.mode)) {
        a.init(t_, s->state);
      } else if (auto* c = std::get_if<InitDirective::Contextual>(&init.mode)) {
        // A parent created earlier in this batch has no pre-batch snapshot.
        auto key = parent.path().str();
        if (!snapshots_.count(key)) snapshots_.emplace(key, snapshot_context(root_, parent.path(), t_));
        const auto& snap = snapshots_.at(key);
        a.init(t_, ctx_.catalog.initializer(c->initializer)(snap, name, a.behavior(), c->params));
      } else {
        a.init(t_);
      }
    } else {
      static_cast<Coordinator&>(*proc).init(t_);
    }
    return proc;
  }

  void emit_added(const Processor& p, bool nested, const std::string& extra_key = {},
                  const std::string& init = {}) {
    auto payload = describe_model(p);
    if (nested) payload["nested"] = "true";
    if (!extra_key.empty()) payload[extra_key] = "true";
    if (!init.empty()) payload["init"] = init;
    records_.push_back(record(TraceKind::StructureAddModel, p.path().str(), std::move(payload)));
    if (p.is_atomic()) return;
    const auto& c = static_cast<const Coordinator&>(p);
    for (const auto& [n, child] : c.children()) emit_added(*child, true);
    for (const auto& cp : c.couplings()) {
      records_.push_back(record(TraceKind::StructureAddCoupling, c.path().str(),
                                {{"coupling", cp.str()},
                                 {"kind", std::string(to_string(cp.kind()))},
                                 {"nested", "true"}}));
    }
  }

  void apply_one(const change::AddModel& ch) {
    Coordinator& parent = *resolve_coupled(root_, ch.parent);
    auto proc = make(ch.name, ch.spec, ch.init, parent);
    parent.add_child(ch.name, std::move(proc));
    emit_added(*parent.child(ch.name), false, {}, ch.init.str());
  }

  void apply_one(const change::RemoveModel& ch) {
    Processor* target = resolve(root_, ch.target);
    Coordinator& parent = *target->parent();
    const std::string name = target->name();
    const std::string path = target->path().str();
    std::vector<Coupling> doomed;
    for (const auto& c : parent.couplings()) {
      if (c.touches(name)) doomed.push_back(c);
    }
    for (const auto& c : doomed) {
      parent.remove_coupling(c);
      records_.push_back(record(TraceKind::StructureRemoveCoupling, parent.path().str(),
                                {{"cascade", "true"},
                                 {"coupling", c.str()},
                                 {"kind", std::string(to_string(c.kind()))}}));
    }
    auto removed = parent.remove_child(name);
    auto payload = describe_model(*removed);
    payload["parent"] = parent.path().str();
    records_.push_back(record(TraceKind::StructureRemoveModel, path, std::move(payload)));
  }

  void apply_one(const change::AddCoupling& ch) {
    Coordinator& scope = *resolve_coupled(root_, ch.scope);
    scope.add_coupling(ch.coupling);
    records_.push_back(record(TraceKind::StructureAddCoupling, scope.path().str(),
                              {{"coupling", ch.coupling.str()},
                               {"kind", std::string(to_string(ch.coupling.kind()))}}));
  }

  void apply_one(const change::RemoveCoupling& ch) {
    Coordinator& scope = *resolve_coupled(root_, ch.scope);
    scope.remove_coupling(ch.coupling);
    records_.push_back(record(TraceKind::StructureRemoveCoupling, scope.path().str(),
                              {{"coupling", ch.coupling.str()},
                               {"kind", std::string(to_string(ch.coupling.kind()))}}));
  }

  void apply_one(const change::AddPort& ch) {
    Processor& target = *resolve(root_, ch.target);
    target.add_port(ch.port);
    records_.push_back(record(TraceKind::StructurePort, target.path().str(),
                              {{"action", "add"},
                               {"direction", std::string(to_string(ch.port.direction))},
                               {"name", ch.port.name},
                               {"type", ch.port.type.str()}}));
  }

  void apply_one(const change::RemovePort& ch) {
    Processor& target = *resolve(root_, ch.target);
    target.remove_port(ch.name, ch.direction);
    records_.push_back(record(TraceKind::StructurePort, target.path().str(),
                              {{"action", "remove"},
                               {"direction", std::string(to_string(ch.direction))},
                               {"name", ch.name}}));
  }

  void apply_one(const change::RetypePort& ch) {
    Processor& target = *resolve(root_, ch.target);
    target.retype_port(ch.name, ch.direction, ch.type);
    records_.push_back(record(TraceKind::StructurePort, target.path().str(),
                              {{"action", "retype"},
                               {"direction", std::string(to_string(ch.direction))},
                               {"name", ch.name},
                               {"type", ch.type.str()}}));
  }

  // Remove + add under the same name. External couplings that still fit the
  // new ports survive; the others are dropped with a trace record.
  void apply_one(const change::ReplaceModel& ch) {
    Processor* target = resolve(root_, ch.target);
    Coordinator& parent = *target->parent();
    const std::string name = target->name();
    const std::string path = target->path().str();

    auto replacement = make(name, ch.spec, ch.init, parent);
    auto old = parent.remove_child(name, /*keep_priority=*/true);
    parent.add_child(name, std::move(replacement));

    std::vector<Coupling> dropped;
    for (const auto& c : parent.couplings()) {
      if (c.touches(name) && detail::check_coupling(parent, c)) dropped.push_back(c);
    }
    for (const auto& c : dropped) {
      parent.remove_coupling(c);
      records_.push_back(record(TraceKind::StructureRemoveCoupling, parent.path().str(),
                                {{"coupling", c.str()},
                                 {"dropped_on_replace", "true"},
                                 {"kind", std::string(to_string(c.kind()))}}));
    }
    auto payload = describe_model(*old);
    payload["parent"] = parent.path().str();
    payload["replace"] = "true";
    records_.push_back(record(TraceKind::StructureRemoveModel, path, std::move(payload)));
    emit_added(*parent.child(name), false, "replace", ch.init.str());
  }

  Coordinator& root_;
  SimTime t_;
  const StructureContext& ctx_;
  const StructureChangeRequest* req_ = nullptr;
  std::map<std::string, ContextSnapshot> snapshots_;
  TraceLog records_;
};

}  // namespace detail

// Applies a batch of requests at a safe point (time `t`). Requests are
// applied in canonical order against the evolving structure. Records of the
// applied changes are appended to `records` as they happen, so a strict-mode
// abort (StructureError on the first invalid request) still leaves the
// changes made before it in the log. In lenient mode an invalid request is
// recorded as an error record, listed in `rejected` and skipped.
inline void apply_batch_into(std::vector<StructureChangeRequest> requests, Coordinator& root,
                             SimTime t, const StructureContext& ctx, TraceLog& records,
                             std::vector<RejectedChange>& rejected) {
  if (root.locked()) {
    throw ProtocolViolation("structure change attempted outside a safe point");
  }
  sort_requests(requests);
  detail::BatchApplier applier(root, t, ctx);
  applier.take_snapshots(requests);
  auto flush = [&] {
    auto done = applier.take_records();
    records.insert(records.end(), done.begin(), done.end());
  };
  for (const auto& req : requests) {
    if (auto issue = validate_change(req, root, ctx.policy, ctx.catalog)) {
      flush();
      if (ctx.policy.conflict == ConflictMode::Strict) {
        root.refresh();
        throw StructureError(*issue, req);
      }
      records.push_back(TraceRecord{t,
                                    TraceKind::Error,
                                    req.requester.str(),
                                    {{"code", "structure_error"},
                                     {"reason", std::string(to_string(issue->reason))},
                                     {"request", std::string(change_name(req.change))},
                                     {"seq", std::to_string(req.seq)}}});
      rejected.push_back({req, *issue});
      continue;
    }
    applier.apply(req);
  }
  flush();
  root.refresh();
}

inline BatchResult apply_batch(std::vector<StructureChangeRequest> requests, Coordinator& root,
                               SimTime t, const StructureContext& ctx) {
  BatchResult result;
  apply_batch_into(std::move(requests), root, t, ctx, result.records, result.rejected);
  return result;
}

}  // namespace dsdevs
