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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsdevs/coordinator.hpp"
#include "dsdevs/dynamic.hpp"
#include "dsdevs/trace.hpp"

namespace dsdevs {

struct RunConfig {
  Mode mode = Mode::Parallel;
  ChangePolicy policy;
  std::optional<SimTime> time_limit;       // stop once the next event is later
  std::optional<std::uint64_t> step_limit;  // stop after this many (micro-)steps
  KernelOptions kernel;
  bool check_structure = false;  // full-tree validation after every step
};

struct RunStats {
  std::uint64_t steps = 0;
  std::uint64_t emitted = 0;    // messages produced by output functions
  std::uint64_t delivered = 0;  // arrivals at atomic input ports
  std::uint64_t discarded = 0;  // root outputs plus emissions that reached nothing
};

// Owns the coordinator tree and the clock and schedules the whole run.
class RootCoordinator {
 public:
  using Observer = std::function<void(const RootCoordinator&)>;

  RootCoordinator(const CoupledSpec& top, const Catalog& catalog, RunConfig config = {})
      : catalog_(catalog), config_(std::move(config)) {
    top_ = build_root(top, catalog_, config_.kernel);
    if (config_.policy.authority == Authority::ExecutiveOnly &&
        (config_.policy.executive.is_root() || !resolve(*top_, config_.policy.executive))) {
      throw ValidationError("executive " + config_.policy.executive.str() +
                            " does not name a component");
    }
  }

  const Coordinator& top() const { return *top_; }
  Coordinator& top() { return *top_; }
  SimTime clock() const { return clock_; }
  const TraceLog& trace() const { return trace_; }
  const RunStats& stats() const { return stats_; }
  const RunConfig& config() const { return config_; }
  const Catalog& catalog() const { return catalog_; }
  bool initialized() const { return initialized_; }
  const std::vector<RejectedChange>& rejected_changes() const { return rejected_; }

  void set_observer(Observer fn) { observer_ = std::move(fn); }

  void initialize(SimTime t = SimTime::zero()) {
    top_->init(t);
    clock_ = t;
    initialized_ = true;
    for_each_processor(*top_, [&](const Processor& p) {
      trace_.push_back({t, TraceKind::Init, p.path().str(), describe_model(p)});
      if (p.is_atomic()) return;
      for (const auto& c : static_cast<const Coordinator&>(p).couplings()) {
        trace_.push_back({t,
                          TraceKind::Init,
                          p.path().str(),
                          {{"coupling", c.str()}, {"kind", std::string(to_string(c.kind()))}}});
      }
    });
  }

  TraceLog step() { return config_.mode == Mode::Parallel ? step_parallel() : step_classic(); }

  // One parallel step: outputs of every imminent atomic, two-phase routing,
  // one transition per affected atomic, then structure changes.
  TraceLog step_parallel() {
    const SimTime t = begin_step();
    const std::size_t first = trace_.size();
    std::vector<StructureChangeRequest> requests;
    {
      ScopedLock guard(*top_);
      std::vector<AtomicProcessor*> imminent;
      collect_imminent(*top_, t, imminent);
      sort_by_path(imminent);

      TraceLog outputs;
      std::map<AtomicProcessor*, Bag> inbox;
      for (AtomicProcessor* a : imminent) {
        Bag out = a->collect_output(t).canonical();
        for (const auto& msg : out) route(*a, msg, t, outputs, inbox, nullptr);
      }
      std::stable_sort(outputs.begin(), outputs.end(),
                       [](const TraceRecord& x, const TraceRecord& y) { return x.model < y.model; });
      append(outputs);

      std::vector<AtomicProcessor*> active = imminent;
      for (const auto& [a, bag] : inbox) {
        if (std::find(active.begin(), active.end(), a) == active.end()) active.push_back(a);
      }
      sort_by_path(active);
      for (AtomicProcessor* a : active) {
        auto it = inbox.find(a);
        Bag bag = it == inbox.end() ? Bag{} : it->second.canonical();
        transit(*a, t, bag, requests);
      }
    }
    finish_step(t, std::move(requests));
    return TraceLog(trace_.begin() + static_cast<std::ptrdiff_t>(first), trace_.end());
  }

  // One classic micro-step: the select order picks a single imminent atomic;
  // only its output fires and each receiver takes exactly one message.
  TraceLog step_classic() {
    const SimTime t = begin_step();
    const std::size_t first = trace_.size();
    std::vector<StructureChangeRequest> requests;
    {
      ScopedLock guard(*top_);
      AtomicProcessor* chosen = select_imminent(t);
      TraceLog outputs;
      std::map<AtomicProcessor*, Bag> inbox;
      Bag out = chosen->collect_output(t).canonical();
      for (const auto& msg : out) route(*chosen, msg, t, outputs, inbox, chosen);
      std::stable_sort(outputs.begin(), outputs.end(),
                       [](const TraceRecord& x, const TraceRecord& y) { return x.model < y.model; });
      append(outputs);

      std::vector<AtomicProcessor*> active{chosen};
      for (const auto& [a, bag] : inbox) active.push_back(a);
      sort_by_path(active);
      for (AtomicProcessor* a : active) {
        auto it = inbox.find(a);
        transit(*a, t, it == inbox.end() ? Bag{} : it->second, requests);
      }
    }
    finish_step(t, std::move(requests));
    return TraceLog(trace_.begin() + static_cast<std::ptrdiff_t>(first), trace_.end());
  }

  // Steps until every model is passive or a stop condition holds. The final
  // record states why the run stopped. Kernel errors leave an error record in
  // the trace and propagate.
  TraceLog run() {
    if (!initialized_) initialize();
    if (halted_) return trace_;
    try {
      while (true) {
        const SimTime next = top_->t_next();
        if (next.is_infinite()) {
          halt("all_passive", clock_);
          break;
        }
        if (config_.time_limit && next > *config_.time_limit) {
          halt("time_limit", std::max(clock_, *config_.time_limit));
          break;
        }
        if (config_.step_limit && stats_.steps >= *config_.step_limit) {
          halt("step_limit", clock_);
          break;
        }
        step();
      }
    } catch (const StructureError& e) {
      std::map<std::string, std::string> payload{{"code", std::string(to_string(e.code()))},
                                                 {"reason", std::string(to_string(e.reason()))}};
      std::string where = "/";
      if (e.request()) {
        payload["request"] = std::string(change_name(e.request()->change));
        payload["seq"] = std::to_string(e.request()->seq);
        where = e.request()->requester.str();
      }
      trace_.push_back({current_, TraceKind::Error, where, std::move(payload)});
      halted_ = true;
      throw;
    } catch (const Error& e) {
      trace_.push_back({current_,
                        TraceKind::Error,
                        "/",
                        {{"code", std::string(to_string(e.code()))},
                         {"message", Value::quote(e.what())}}});
      halted_ = true;
      throw;
    }
    return trace_;
  }

 private:
  SimTime begin_step() {
    if (!initialized_) initialize();
    const SimTime t = top_->t_next();
    if (t.is_infinite()) throw ProtocolViolation("step requested with every model passive");
    current_ = t;
    return t;
  }

  void finish_step(SimTime t, std::vector<StructureChangeRequest> requests) {
    if (!requests.empty()) {
      StructureContext ctx{catalog_, config_.policy, config_.kernel};
      apply_batch_into(std::move(requests), *top_, t, ctx, trace_, rejected_);
    }
    top_->refresh();
    clock_ = t;
    ++stats_.steps;
    if (config_.check_structure) {
      auto issues = check_well_formed(*top_);
      if (!issues.empty()) throw ProtocolViolation("structure invariant broken: " + issues.front());
    }
    if (observer_) observer_(*this);
  }

  void append(const TraceLog& records) { trace_.insert(trace_.end(), records.begin(), records.end()); }

  void halt(const char* reason, SimTime at) {
    clock_ = at;
    trace_.push_back({at, TraceKind::Halt, "/", {{"reason", reason}}});
    halted_ = true;
  }

  static void collect_imminent(const Coordinator& c, SimTime t, std::vector<AtomicProcessor*>& out) {
    if (c.t_next() != t) return;
    for (const auto& [n, child] : c.children()) {
      if (child->t_next() != t) continue;
      if (child->is_atomic()) {
        out.push_back(static_cast<AtomicProcessor*>(child.get()));
      } else {
        collect_imminent(static_cast<const Coordinator&>(*child), t, out);
      }
    }
  }

  static void sort_by_path(std::vector<AtomicProcessor*>& v) {
    std::vector<std::pair<std::string, AtomicProcessor*>> keyed;
    for (auto* a : v) keyed.emplace_back(a->path().str(), a);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = keyed[i].second;
  }

  // Select applied level by level: the first imminent child in each
  // coordinator's priority list, descending until an atomic is reached.
  AtomicProcessor* select_imminent(SimTime t) const {
    const Coordinator* scope = top_.get();
    while (true) {
      Processor* pick = nullptr;
      for (const auto& name : scope->select_order()) {
        Processor* c = scope->child(name);
        if (c && c->t_next() == t) {
          pick = c;
          break;
        }
      }
      if (!pick) throw ProtocolViolation("no imminent component under " + scope->path().str());
      if (pick->is_atomic()) return static_cast<AtomicProcessor*>(pick);
      scope = static_cast<const Coordinator*>(pick);
    }
  }

  // Routes one emitted message and records it. In classic mode (`chosen`
  // set) a receiver may take only one message per micro-step.
  void route(const AtomicProcessor& source, const Message& msg, SimTime t, TraceLog& outputs,
             std::map<AtomicProcessor*, Bag>& inbox, const AtomicProcessor* chosen) {
    ++stats_.emitted;
    outputs.push_back(
        {t, TraceKind::Output, source.path().str(), {{"port", msg.port}, {"value", msg.value.str()}}});
    RouteResult r = route_emission(source, msg);
    for (const auto& d : r.deliveries) {
      if (chosen) {
        if (d.target == chosen) {
          throw ClassicSemanticsViolation(chosen->path().str() +
                                          " would receive its own output in a classic micro-step");
        }
        if (!inbox[d.target].empty()) {
          throw ClassicSemanticsViolation(d.target->path().str() +
                                          " offered more than one message at time " + t.str());
        }
      }
      inbox[d.target].add(d.port, msg.value);
      ++stats_.delivered;
    }
    for (const auto& port : r.root_outputs) {
      outputs.push_back({t, TraceKind::Output, "/", {{"port", port}, {"value", msg.value.str()}}});
      ++stats_.discarded;
    }
    if (r.dead_end()) ++stats_.discarded;
  }

  // port:value pairs in canonical bag order, ';'-separated.
  static std::string render_inputs(const Bag& bag) {
    std::string out;
    for (const auto& m : bag.canonical()) {
      out += (out.empty() ? "" : ";") + m.port + ":" + m.value.str();
    }
    return out;
  }

  void transit(AtomicProcessor& a, SimTime t, const Bag& bag,
               std::vector<StructureChangeRequest>& requests) {
    TransitionResult res = a.transition(t, bag, config_.mode);
    TraceRecord rec{t, TraceKind::Internal, a.path().str(), {{"t_next", a.t_next().str()}}};
    switch (res.kind) {
      case TransitionKind::Internal: break;
      case TransitionKind::External:
        rec.kind = TraceKind::External;
        rec.payload["e"] = res.elapsed.str();
        rec.payload["inputs"] = render_inputs(bag);
        break;
      case TransitionKind::Confluent:
        rec.kind = TraceKind::Confluent;
        rec.payload["inputs"] = render_inputs(bag);
        break;
    }
    trace_.push_back(std::move(rec));
    for (auto& ch : res.intent) requests.push_back({a.path(), a.next_seq(), std::move(ch)});
  }

  const Catalog& catalog_;
  RunConfig config_;
  std::unique_ptr<Coordinator> top_;
  SimTime clock_;
  SimTime current_;
  bool initialized_ = false;
  bool halted_ = false;
  TraceLog trace_;
  RunStats stats_;
  std::vector<RejectedChange> rejected_;
  Observer observer_;
};

}  // namespace dsdevs
