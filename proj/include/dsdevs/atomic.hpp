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
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dsdevs/behavior.hpp"
#include "dsdevs/error.hpp"
#include "dsdevs/message.hpp"
#include "dsdevs/spec.hpp"
#include "dsdevs/time.hpp"

namespace dsdevs {

enum class Mode { Classic, Parallel };

inline std::string_view to_string(Mode m) { return m == Mode::Classic ? "classic" : "parallel"; }

struct KernelOptions {
  // Transitions one model may perform at a single time value before the
  // kernel reports a zero-delay livelock.
  std::size_t zero_time_limit = 10000;
};

class Coordinator;

// A node of the runtime tree: a simulator for an atomic model or a
// coordinator for a coupled one.
class Processor {
 public:
  Processor(std::string name, std::vector<PortSpec> ports)
      : name_(std::move(name)), ports_(std::move(ports)) {}
  virtual ~Processor() = default;

  Processor(const Processor&) = delete;
  Processor& operator=(const Processor&) = delete;

  virtual bool is_atomic() const = 0;
  virtual ModelSpec to_spec() const = 0;

  const std::string& name() const { return name_; }
  Coordinator* parent() const { return parent_; }
  void attach(Coordinator* parent, std::string name) {
    parent_ = parent;
    name_ = std::move(name);
  }

  ModelPath path() const;

  SimTime t_last() const { return t_last_; }
  SimTime t_next() const { return t_next_; }

  const std::vector<PortSpec>& ports() const { return ports_; }
  const PortSpec* port(std::string_view name, Direction dir) const {
    for (const auto& p : ports_) {
      if (p.name == name && p.direction == dir) return &p;
    }
    return nullptr;
  }

  void add_port(PortSpec p) {
    if (port(p.name, p.direction)) {
      throw UsageError("port '" + p.name + "' already declared");
    }
    ports_.push_back(std::move(p));
  }
  void remove_port(std::string_view name, Direction dir) {
    std::erase_if(ports_, [&](const PortSpec& p) { return p.name == name && p.direction == dir; });
  }
  void retype_port(std::string_view name, Direction dir, ValueType type) {
    for (auto& p : ports_) {
      if (p.name == name && p.direction == dir) p.type = std::move(type);
    }
  }

 protected:
  std::string name_;
  Coordinator* parent_ = nullptr;
  std::vector<PortSpec> ports_;
  SimTime t_last_;
  SimTime t_next_ = SimTime::infinity();
};

enum class TransitionKind { Internal, External, Confluent };

struct TransitionResult {
  TransitionKind kind = TransitionKind::Internal;
  SimTime elapsed;
  std::vector<StructureChange> intent;
};

// Drives one atomic model: holds its state, t_last and t_next, and enforces
// the calling protocol (output strictly before the transition at t_next).
class AtomicProcessor : public Processor {
 public:
  AtomicProcessor(std::string name, AtomicSpec spec, BehaviorInstance instance,
                  KernelOptions options = {})
      : Processor(std::move(name), instance.ports),
        spec_(std::move(spec)),
        behavior_(std::move(instance.behavior)),
        options_(options) {
    // Remember what the factory would declare so to_spec() only records
    // ports that changed at runtime.
    default_ports_ = spec_.ports ? std::optional<std::vector<PortSpec>>{} : ports_;
  }

  bool is_atomic() const override { return true; }

  ModelSpec to_spec() const override {
    AtomicSpec out{spec_.behavior, spec_.params, std::nullopt};
    if (!default_ports_ || *default_ports_ != ports_) out.ports = ports_;
    return ModelSpec(std::move(out));
  }

  const AtomicBehavior& behavior() const { return *behavior_; }
  const Value& state() const { return state_; }
  std::uint64_t next_seq() { return seq_++; }

  void init(SimTime t) { init(t, behavior_->initial_state()); }

  void init(SimTime t, Value state) {
    state_ = std::move(state);
    t_last_ = t;
    t_next_ = t + checked_ta(state_);
    zero_time_count_ = 0;
    zero_time_at_ = t;
  }

  // The output function. Only legal while imminent; never touches the state.
  Bag collect_output(SimTime t) const {
    if (t != t_next_) {
      throw ProtocolViolation("output requested from " + path().str() + " at " + t.str() +
                              " but its next event is at " + t_next_.str());
    }
    Bag out = behavior_->output(state_);
    for (const auto& m : out) {
      const PortSpec* p = port(m.port, Direction::Out);
      if (!p) {
        throw RoutingError(path().str() + " emitted on undeclared output port '" + m.port + "'");
      }
      if (auto mm = check_value(m.value, p->type)) {
        throw TypeMismatchError(path().str() + " output port '" + m.port + "': " + mm->str());
      }
    }
    return out;
  }

  // Dispatches to the internal, external or confluent transition. In classic
  // mode an input arriving exactly at t_next preempts the internal event.
  TransitionResult transition(SimTime t, const Bag& input, Mode mode = Mode::Parallel) {
    if (t < t_last_ || t > t_next_) {
      throw ProtocolViolation(path().str() + ": transition at " + t.str() + " outside [" +
                              t_last_.str() + ", " + t_next_.str() + "]");
    }
    if (input.empty() && t != t_next_) {
      throw ProtocolViolation(path().str() + ": internal transition at " + t.str() +
                              " but next event is at " + t_next_.str());
    }
    for (const auto& m : input) {
      const PortSpec* p = port(m.port, Direction::In);
      if (!p) {
        throw RoutingError(path().str() + " received on undeclared input port '" + m.port + "'");
      }
      if (auto mm = check_value(m.value, p->type)) {
        throw TypeMismatchError(path().str() + " input port '" + m.port + "': " + mm->str());
      }
    }

    count_zero_time(t);

    TransitionResult result;
    result.elapsed = t - t_last_;
    if (input.empty()) {
      result.kind = TransitionKind::Internal;
      state_ = behavior_->delta_int(state_);
    } else if (t == t_next_ && mode == Mode::Parallel) {
      result.kind = TransitionKind::Confluent;
      state_ = behavior_->delta_con(state_, input);
    } else {
      result.kind = TransitionKind::External;
      state_ = behavior_->delta_ext(state_, result.elapsed, input);
    }
    t_last_ = t;
    t_next_ = t + checked_ta(state_);
    result.intent = behavior_->structure_intent(state_, path());
    return result;
  }

 private:
  SimTime checked_ta(const Value& s) const {
    try {
      return behavior_->time_advance(s);
    } catch (const UsageError& e) {
      throw ModelContractViolation(path().str() + ": invalid time advance: " + e.what());
    }
  }

  void count_zero_time(SimTime t) {
    if (t == zero_time_at_) {
      if (++zero_time_count_ > options_.zero_time_limit) {
        throw LivelockSuspected(path().str() + " performed more than " +
                                std::to_string(options_.zero_time_limit) +
                                " transitions at time " + t.str());
      }
    } else {
      zero_time_at_ = t;
      zero_time_count_ = 1;
    }
  }

  AtomicSpec spec_;
  std::shared_ptr<const AtomicBehavior> behavior_;
  KernelOptions options_;
  std::optional<std::vector<PortSpec>> default_ports_;
  Value state_;
  std::uint64_t seq_ = 0;
  SimTime zero_time_at_;
  std::size_t zero_time_count_ = 0;
};

}  // namespace dsdevs
