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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsdevs/error.hpp"
#include "dsdevs/message.hpp"
#include "dsdevs/spec.hpp"
#include "dsdevs/structure.hpp"
#include "dsdevs/time.hpp"
#include "dsdevs/value.hpp"

namespace dsdevs {

// Behavior of an atomic model: the state set, the three transition
// functions, the output function and the time advance.
//
// Implementations must be pure. Every function maps its arguments to the same
// result on every call; the state is a record Value owned by the behavior.
class AtomicBehavior {
 public:
  virtual ~AtomicBehavior() = default;

  virtual Value initial_state() const = 0;
  virtual Value delta_int(const Value& state) const = 0;
  virtual Value delta_ext(const Value& state, SimTime elapsed, const Bag& input) const = 0;

  // Collision of an input with an internal event. Internal first by default.
  virtual Value delta_con(const Value& state, const Bag& input) const {
    return delta_ext(delta_int(state), SimTime::zero(), input);
  }

  virtual Bag output(const Value& state) const = 0;
  virtual SimTime time_advance(const Value& state) const = 0;

  // Structure changes this model asks for after entering `state`. `self` is
  // the model's own path so requests can name siblings and the parent scope.
  virtual std::vector<StructureChange> structure_intent(const Value& /*state*/,
                                                        const ModelPath& /*self*/) const {
    return {};
  }

  // Fields other models may read through a ContextSnapshot.
  virtual Value observables(const Value& /*state*/) const { return Value::record({}); }
};

struct ParamSpec {
  std::string name;
  std::optional<ValueType> type;       // absent: any value
  std::optional<Value> default_value;  // absent: required
};

struct BehaviorInstance {
  std::shared_ptr<const AtomicBehavior> behavior;
  std::vector<PortSpec> ports;
};

// Receives parameters already checked against the schema, defaults filled in.
using BehaviorFactory = std::function<BehaviorInstance(const Value& params)>;

// Computes the first state of a model inserted at runtime.
using ContextInitializer = std::function<Value(
    const ContextSnapshot& context, const std::string& name, const AtomicBehavior& behavior,
    const Value& params)>;

// Registry of named behaviors and contextual initializers. Model files refer
// to behaviors only by name, which keeps every model a pure data artifact.
class Catalog {
 public:
  struct Entry {
    std::vector<ParamSpec> schema;
    BehaviorFactory factory;
  };

  void add_behavior(const std::string& name, std::vector<ParamSpec> schema,
                    BehaviorFactory factory) {
    if (behaviors_.count(name)) throw UsageError("behavior '" + name + "' already registered");
    behaviors_.emplace(name, Entry{std::move(schema), std::move(factory)});
  }

  void add_initializer(const std::string& name, ContextInitializer fn) {
    if (initializers_.count(name)) {
      throw UsageError("initializer '" + name + "' already registered");
    }
    initializers_.emplace(name, std::move(fn));
  }

  bool has_behavior(const std::string& name) const { return behaviors_.count(name) != 0; }
  bool has_initializer(const std::string& name) const { return initializers_.count(name) != 0; }

  const Entry& entry(const std::string& name) const {
    auto it = behaviors_.find(name);
    if (it == behaviors_.end()) throw ParameterError("unknown behavior '" + name + "'");
    return it->second;
  }

  const ContextInitializer& initializer(const std::string& name) const {
    auto it = initializers_.find(name);
    if (it == initializers_.end()) throw ParameterError("unknown initializer '" + name + "'");
    return it->second;
  }

  std::vector<std::string> behavior_names() const {
    std::vector<std::string> out;
    for (const auto& [n, e] : behaviors_) out.push_back(n);
    return out;
  }

  // Checks `params` against the schema and fills defaults.
  Value resolve_params(const std::string& behavior, const Value& params) const {
    const Entry& e = entry(behavior);
    if (!params.is_record()) throw ParameterError(behavior + ": parameters must be a record");
    for (const auto& [name, v] : params.fields()) {
      bool known = false;
      for (const auto& p : e.schema) known = known || p.name == name;
      if (!known) throw ParameterError(behavior + ": unknown parameter '" + name + "'");
    }
    Value::Record out;
    for (const auto& p : e.schema) {
      const Value* given = params.find(p.name);
      if (!given) {
        if (!p.default_value) {
          throw ParameterError(behavior + ": missing parameter '" + p.name + "'");
        }
        out.emplace_back(p.name, *p.default_value);
        continue;
      }
      auto coerced = p.type ? coerce_value(*given, *p.type) : std::optional<Value>(*given);
      if (!coerced) {
        throw ParameterError(behavior + ": parameter '" + p.name + "' expects " + p.type->str() +
                             ", got " + given->str());
      }
      out.emplace_back(p.name, std::move(*coerced));
    }
    return Value::record(std::move(out));
  }

  // The behavior with its factory-declared ports (before any override).
  BehaviorInstance instantiate_defaults(const AtomicSpec& spec) const {
    return entry(spec.behavior).factory(resolve_params(spec.behavior, spec.params));
  }

  BehaviorInstance instantiate(const AtomicSpec& spec) const {
    BehaviorInstance inst = instantiate_defaults(spec);
    if (spec.ports) inst.ports = *spec.ports;
    return inst;
  }

  std::vector<PortSpec> ports_of(const AtomicSpec& spec) const {
    return instantiate(spec).ports;
  }

 private:
  std::map<std::string, Entry> behaviors_;
  std::map<std::string, ContextInitializer> initializers_;
};

}  // namespace dsdevs
