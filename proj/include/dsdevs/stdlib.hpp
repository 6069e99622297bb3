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
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "dsdevs/behavior.hpp"
#include "dsdevs/structure.hpp"

namespace dsdevs {
namespace stdlib {

// FIFO queues live inside record states as fields keyed by a zero-padded
// sequence number, so lexicographic field order is arrival order.
namespace queue {

inline std::string key(std::int64_t n) {
  std::string digits = std::to_string(n);
  return "q" + std::string(digits.size() < 12 ? 12 - digits.size() : 0, '0') + digits;
}

inline Value push(const Value& q, std::int64_t seq, Value item) {
  return q.with(key(seq), std::move(item));
}

inline const Value& front(const Value& q) { return q.fields().front().second; }

inline Value pop(const Value& q) {
  Value::Record rest(q.fields().begin() + 1, q.fields().end());
  return Value::record(std::move(rest));
}

inline std::int64_t size(const Value& q) { return static_cast<std::int64_t>(q.fields().size()); }

}  // namespace queue

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  return out;
}

inline std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

inline SimTime sigma_of(const Value& s) {
  double v = s.at("sigma").as_real();
  return std::isinf(v) ? SimTime::infinity() : SimTime(v);
}

inline double positive_real(const Value& params, const std::string& name,
                            const std::string& behavior) {
  double v = params.at(name).as_real();
  if (!(v > 0) || std::isinf(v)) {
    throw ParameterError(behavior + ": " + name + " must be positive and finite, got " +
                         Value::render_real(v));
  }
  return v;
}

inline ValueType type_param(const Value& params, const std::string& name,
                            const std::string& behavior) {
  try {
    return parse_type(params.at(name).as_text());
  } catch (const UsageError& e) {
    throw ParameterError(behavior + ": " + name + ": " + e.what());
  }
}

inline const double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------

// Emits `value` on "out" every `period`, at most `count` times (-1: forever).
// Inputs on "in" are ignored; the pending emission keeps its schedule.
class Generator : public AtomicBehavior {
 public:
  Generator(double period, Value value, std::int64_t count)
      : period_(period), value_(std::move(value)), count_(count) {}

  Value initial_state() const override {
    return Value::record({{"emitted", 0}, {"sigma", count_ == 0 ? kInf : period_}});
  }

  Value delta_int(const Value& s) const override {
    std::int64_t n = s.at("emitted").as_integer() + 1;
    bool more = count_ < 0 || n < count_;
    return Value::record({{"emitted", n}, {"sigma", more ? period_ : kInf}});
  }

  Value delta_ext(const Value& s, SimTime e, const Bag&) const override {
    double sigma = s.at("sigma").as_real();
    return s.with("sigma", std::isinf(sigma) ? sigma : std::max(0.0, sigma - e.value()));
  }

  Bag output(const Value&) const override { return Bag{{Message{"out", value_}}}; }
  SimTime time_advance(const Value& s) const override { return sigma_of(s); }

  Value observables(const Value& s) const override {
    return Value::record({{"emitted", s.at("emitted")}});
  }

 private:
  double period_;
  Value value_;
  std::int64_t count_;
};

// Single-server FIFO queue. queue_length counts every job in the system,
// including the one in service. With report_load the current queue length
// goes out on "load" after every arrival and every completion.
class Processor : public AtomicBehavior {
 public:
  Processor(double service, std::int64_t capacity, bool report_load)
      : service_(service), capacity_(capacity), report_(report_load) {}

  Value initial_state() const override {
    return Value::record({{"queue", Value::record({})},
                          {"next_id", 0},
                          {"sigma", kInf},
                          {"report", false},
                          {"jobs_in", 0},
                          {"jobs_done", 0},
                          {"jobs_dropped", 0}});
  }

  Value delta_int(const Value& s) const override {
    if (s.at("report").as_boolean()) return s.with("report", false);
    Value q = queue::pop(s.at("queue"));
    Value out = s.with("queue", q);
    out.set("jobs_done", s.at("jobs_done").as_integer() + 1);
    out.set("sigma", queue::size(q) > 0 ? service_ : kInf);
    return out;
  }

  Value delta_ext(const Value& s, SimTime e, const Bag& input) const override {
    Value out = s;
    double sigma = s.at("sigma").as_real();
    if (!std::isinf(sigma)) sigma = std::max(0.0, sigma - e.value());
    Value q = s.at("queue");
    std::int64_t id = s.at("next_id").as_integer();
    std::int64_t in = s.at("jobs_in").as_integer();
    std::int64_t dropped = s.at("jobs_dropped").as_integer();
    bool arrived = false;
    for (const auto& m : input.canonical()) {
      if (m.port != "in") continue;
      arrived = true;
      ++in;
      if (capacity_ >= 0 && queue::size(q) >= capacity_) {
        ++dropped;
        continue;
      }
      if (queue::size(q) == 0) sigma = service_;
      q = queue::push(q, id++, m.value);
    }
    out.set("queue", q);
    out.set("next_id", id);
    out.set("sigma", sigma);
    out.set("jobs_in", in);
    out.set("jobs_dropped", dropped);
    if (report_ && arrived) out.set("report", true);
    return out;
  }

  Bag output(const Value& s) const override {
    const Value& q = s.at("queue");
    if (s.at("report").as_boolean()) return Bag{{Message{"load", queue::size(q)}}};
    Bag out{{Message{"done", queue::front(q)}}};
    if (report_) out.add(Message{"load", queue::size(q) - 1});
    return out;
  }

  SimTime time_advance(const Value& s) const override {
    return s.at("report").as_boolean() ? SimTime::zero() : sigma_of(s);
  }

  Value observables(const Value& s) const override {
    return Value::record({{"queue_length", queue::size(s.at("queue"))},
                          {"jobs_done", s.at("jobs_done")},
                          {"jobs_dropped", s.at("jobs_dropped")},
                          {"busy", queue::size(s.at("queue")) > 0}});
  }

 private:
  double service_;
  std::int64_t capacity_;
  bool report_;
};

// Counts arrivals and completions during [0, window]. When the window closes
// it emits {arrived, solved, throughput} once and goes passive. Messages at
// exactly the window end still count.
class Transducer : public AtomicBehavior {
 public:
  explicit Transducer(double window) : window_(window) {}

  Value initial_state() const override {
    return Value::record({{"phase", "observing"},
                          {"clock", 0.0},
                          {"sigma", window_},
                          {"arrived", 0},
                          {"solved", 0}});
  }

  Value delta_int(const Value& s) const override {
    const std::string& phase = s.at("phase").as_text();
    if (phase == "observing") {
      return s.with("phase", "reporting").with("clock", window_).with("sigma", 0.0);
    }
    return s.with("phase", "done").with("sigma", kInf);
  }

  Value delta_ext(const Value& s, SimTime e, const Bag& input) const override {
    Value out = s;
    const std::string& phase = s.at("phase").as_text();
    double clock = s.at("clock").as_real() + e.value();
    out.set("clock", clock);
    if (phase == "observing") out.set("sigma", std::max(0.0, window_ - clock));
    if (phase == "done" || clock > window_) return out;
    out.set("arrived", s.at("arrived").as_integer() + static_cast<std::int64_t>(input.count("arrived")));
    out.set("solved", s.at("solved").as_integer() + static_cast<std::int64_t>(input.count("solved")));
    return out;
  }

  Bag output(const Value& s) const override {
    if (s.at("phase").as_text() != "reporting") return {};
    std::int64_t solved = s.at("solved").as_integer();
    return Bag{{Message{"report",
                        Value::record({{"arrived", s.at("arrived")},
                                       {"solved", solved},
                                       {"throughput", static_cast<double>(solved) / window_}})}}};
  }

  SimTime time_advance(const Value& s) const override { return sigma_of(s); }

  Value observables(const Value& s) const override {
    return Value::record({{"arrived", s.at("arrived")}, {"solved", s.at("solved")}});
  }

 private:
  double window_;
};

inline ValueType report_type() {
  return ValueType::record({{"arrived", ValueType::integer()},
                            {"solved", ValueType::integer()},
                            {"throughput", ValueType::real()}});
}

// Forwards each message on "in" to one output port with zero delay.
// round_robin cycles through the rotation; by_field reads `field` of a
// record job: text names the port, an integer indexes the rotation.
// Text on "ctl" edits the rotation: "+name" appends, "-name" removes.
class Router : public AtomicBehavior {
 public:
  Router(std::vector<std::string> ports, bool by_field, std::string field)
      : ports_(std::move(ports)), by_field_(by_field), field_(std::move(field)) {}

  Value initial_state() const override {
    return Value::record({{"rotation", join_list(ports_)},
                          {"last", -1},
                          {"next_id", 0},
                          {"pending", Value::record({})}});
  }

  Value delta_int(const Value& s) const override {
    return s.with("pending", Value::record({}));
  }

  Value delta_ext(const Value& s, SimTime, const Bag& input) const override {
    std::vector<std::string> rotation = split_list(s.at("rotation").as_text());
    std::int64_t last = s.at("last").as_integer();
    std::int64_t id = s.at("next_id").as_integer();
    Value pending = s.at("pending");
    for (const auto& m : input.canonical()) {
      if (m.port == "ctl") {
        const std::string& cmd = m.value.as_text();
        std::string name = cmd.size() > 1 ? cmd.substr(1) : "";
        auto it = std::find(rotation.begin(), rotation.end(), name);
        if (cmd[0] == '+' && it == rotation.end() && !name.empty()) {
          rotation.push_back(name);
        } else if (cmd[0] == '-' && it != rotation.end()) {
          auto idx = static_cast<std::int64_t>(it - rotation.begin());
          rotation.erase(it);
          if (idx <= last) --last;
        }
        continue;
      }
      if (m.port != "in") continue;
      std::string target;
      if (by_field_) {
        const Value* f = m.value.find(field_);
        if (!f) throw RoutingError("router: job " + m.value.str() + " lacks field '" + field_ + "'");
        if (f->is_text()) {
          target = f->as_text();
          if (std::find(rotation.begin(), rotation.end(), target) == rotation.end()) {
            throw RoutingError("router: no output port '" + target + "'");
          }
        } else if (f->is_integer() && !rotation.empty()) {
          auto n = static_cast<std::int64_t>(rotation.size());
          target = rotation[static_cast<std::size_t>(((f->as_integer() % n) + n) % n)];
        } else {
          throw RoutingError("router: field '" + field_ + "' of " + m.value.str() +
                             " selects no port");
        }
      } else {
        if (rotation.empty()) throw RoutingError("router: no output ports to route " + m.value.str());
        last = (last + 1) % static_cast<std::int64_t>(rotation.size());
        target = rotation[static_cast<std::size_t>(last)];
      }
      pending = queue::push(pending, id++, Value::record({{"port", target}, {"value", m.value}}));
    }
    return Value::record({{"rotation", join_list(rotation)},
                          {"last", last},
                          {"next_id", id},
                          {"pending", pending}});
  }

  Bag output(const Value& s) const override {
    Bag out;
    for (const auto& [k, item] : s.at("pending").fields()) {
      out.add(Message{item.at("port").as_text(), item.at("value")});
    }
    return out;
  }

  SimTime time_advance(const Value& s) const override {
    return queue::size(s.at("pending")) > 0 ? SimTime::zero() : SimTime::infinity();
  }

  Value observables(const Value& s) const override {
    return Value::record({{"rotation", s.at("rotation")}});
  }

 private:
  std::vector<std::string> ports_;
  bool by_field_;
  std::string field_;
};

// Grows and shrinks a pool of processor workers behind a router. Workers
// report their queue length on load_<name>. A report above the threshold adds
// a worker (up to max_workers); a worker idle for idle_period is retired
// while more than one remains. The router learns of each change over "ctl":
// after the insertion, and before the removal.
class PoolExecutive : public AtomicBehavior {
 public:
  struct Config {
    std::int64_t threshold = 0;
    std::int64_t max_workers = 1;
    double service = 1;
    double idle_period = 1;
    std::int64_t initial_workers = 1;
    std::string dispatcher = "disp";
    std::string prefix = "w";
    std::string done_sink;  // "" or an endpoint in the parent scope
    ValueType job_type = ValueType::integer();
  };

  explicit PoolExecutive(Config c) : c_(std::move(c)) {}

  Value initial_state() const override {
    Value workers = Value::record({});
    for (std::int64_t i = 0; i < c_.initial_workers; ++i) {
      workers.set(c_.prefix + std::to_string(i), worker(-1.0));
    }
    return Value::record({{"clock", 0.0},
                          {"workers", workers},
                          {"created", c_.initial_workers},
                          {"ctl", Value::record({})},
                          {"ctl_id", 0},
                          {"retiring", ""},
                          {"actions", ""},
                          {"sigma", kInf}});
  }

  Value delta_int(const Value& s) const override {
    Value out = s.with("clock", s.at("clock").as_real() + s.at("sigma").as_real())
                    .with("actions", "");
    if (queue::size(s.at("ctl")) > 0) {
      // ctl messages just went out; carry out the pending retirements.
      std::vector<std::string> actions;
      for (const auto& n : split_list(s.at("retiring").as_text())) actions.push_back("-" + n);
      out.set("actions", join_list(actions));
      out.set("retiring", "");
      out.set("ctl", Value::record({}));
      return rescheduled(out);
    }
    double clock = out.at("clock").as_real();
    Value workers = out.at("workers");
    std::vector<std::string> retire;
    std::int64_t remaining = queue::size(workers);
    std::vector<std::string> names;
    for (const auto& [n, w] : workers.fields()) names.push_back(n);
    std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
      return index_of(a) > index_of(b);
    });
    for (const auto& n : names) {
      double since = workers.at(n).at("idle_since").as_real();
      if (remaining > 1 && since >= 0 && clock - since >= c_.idle_period) {
        retire.push_back(n);
        --remaining;
      }
    }
    Value ctl = out.at("ctl");
    std::int64_t id = out.at("ctl_id").as_integer();
    Value::Record kept;
    for (const auto& [n, w] : workers.fields()) {
      if (std::find(retire.begin(), retire.end(), n) == retire.end()) kept.emplace_back(n, w);
    }
    for (const auto& n : retire) ctl = queue::push(ctl, id++, "-" + n);
    out.set("workers", Value::record(std::move(kept)));
    out.set("ctl", ctl);
    out.set("ctl_id", id);
    out.set("retiring", join_list(retire));
    return rescheduled(out);
  }

  Value delta_ext(const Value& s, SimTime e, const Bag& input) const override {
    double clock = s.at("clock").as_real() + e.value();
    Value out = s.with("clock", clock).with("actions", "");
    Value workers = out.at("workers");
    std::int64_t peak = -1;
    for (const auto& m : input) {
      if (m.port.rfind("load_", 0) != 0) continue;
      std::string name = m.port.substr(5);
      const Value* w = workers.find(name);
      if (!w) continue;
      std::int64_t load = m.value.as_integer();
      peak = std::max(peak, load);
      double since = w->at("idle_since").as_real();
      if (load > 0) {
        since = -1.0;
      } else if (since < 0) {
        since = clock;
      }
      workers.set(name, w->with("load", load).with("idle_since", since));
    }
    std::vector<std::string> actions;
    Value ctl = out.at("ctl");
    std::int64_t id = out.at("ctl_id").as_integer();
    if (peak > c_.threshold && queue::size(workers) < c_.max_workers) {
      std::int64_t n = out.at("created").as_integer();
      std::string name = c_.prefix + std::to_string(n);
      out.set("created", n + 1);
      workers.set(name, worker(clock));
      actions.push_back("+" + name);
      ctl = queue::push(ctl, id++, "+" + name);
    }
    out.set("workers", workers);
    out.set("ctl", ctl);
    out.set("ctl_id", id);
    out.set("actions", join_list(actions));
    return rescheduled(out);
  }

  Bag output(const Value& s) const override {
    Bag out;
    for (const auto& [k, v] : s.at("ctl").fields()) out.add(Message{"ctl", v});
    return out;
  }

  SimTime time_advance(const Value& s) const override { return sigma_of(s); }

  std::vector<StructureChange> structure_intent(const Value& s,
                                                const ModelPath& self) const override {
    std::vector<StructureChange> out;
    const ModelPath scope = self.parent();
    const ModelPath disp = scope.child(c_.dispatcher);
    for (const auto& action : split_list(s.at("actions").as_text())) {
      const std::string name = action.substr(1);
      const std::string load_port = "load_" + name;
      if (action[0] == '+') {
        out.push_back(change::AddPort{disp, {name, Direction::Out, c_.job_type}});
        out.push_back(change::AddModel{
            scope, name,
            ModelSpec(AtomicSpec{"processor",
                                 Value::record({{"service_time", c_.service},
                                                {"job_type", c_.job_type.str()},
                                                {"report_load", true}}),
                                 std::nullopt}),
            InitDirective::contextual("idle_processor")});
        out.push_back(change::AddCoupling{scope, {{c_.dispatcher, name}, {name, "in"}}});
        out.push_back(change::AddPort{self, {load_port, Direction::In, ValueType::integer()}});
        out.push_back(change::AddCoupling{scope, {{name, "load"}, {self.name(), load_port}}});
        if (!c_.done_sink.empty()) {
          out.push_back(change::AddCoupling{scope, {{name, "done"}, sink()}});
        }
      } else {
        out.push_back(change::RemoveModel{scope.child(name)});
        out.push_back(change::RemovePort{disp, name, Direction::Out});
        out.push_back(change::RemovePort{self, load_port, Direction::In});
      }
    }
    return out;
  }

  Value observables(const Value& s) const override {
    return Value::record({{"workers", queue::size(s.at("workers"))}});
  }

 private:
  static Value worker(double idle_since) {
    return Value::record({{"load", 0}, {"idle_since", idle_since}});
  }

  std::int64_t index_of(const std::string& name) const {
    try {
      return std::stoll(name.substr(c_.prefix.size()));
    } catch (...) {
      return -1;
    }
  }

  Endpoint sink() const {
    auto dot = c_.done_sink.find('.');
    if (dot == std::string::npos) return {"", c_.done_sink};
    return {c_.done_sink.substr(0, dot), c_.done_sink.substr(dot + 1)};
  }

  // ctl pending: fire now. Otherwise wake at the earliest idle deadline.
  Value rescheduled(const Value& s) const {
    if (queue::size(s.at("ctl")) > 0) return s.with("sigma", 0.0);
    const Value& workers = s.at("workers");
    double clock = s.at("clock").as_real();
    double sigma = kInf;
    if (queue::size(workers) > 1) {
      for (const auto& [n, w] : workers.fields()) {
        double since = w.at("idle_since").as_real();
        if (since >= 0) sigma = std::min(sigma, std::max(0.0, since + c_.idle_period - clock));
      }
    }
    return s.with("sigma", sigma);
  }

  Config c_;
};

}  // namespace stdlib

// A fresh worker joins idle. It records when it was created and how many
// queueing siblings it found.
inline Value idle_processor_state(const ContextSnapshot& ctx, const std::string&,
                                  const AtomicBehavior& behavior, const Value&) {
  std::int64_t peers = 0;
  for (const auto& sib : ctx.siblings) {
    if (sib.observables.find("queue_length")) ++peers;
  }
  return behavior.initial_state()
      .with("created_at", ctx.time.value())
      .with("peers", peers);
}

// Catalog with the standard behaviors: generator, processor, transducer,
// router and pool_executive, plus the idle_processor initializer.
inline Catalog standard_catalog() {
  using stdlib::positive_real;
  using stdlib::type_param;
  const ValueType I = ValueType::integer(), R = ValueType::real(), B = ValueType::boolean(),
                  T = ValueType::text();
  Catalog cat;

  cat.add_behavior(
      "generator",
      {{"period", R, {}}, {"value", std::nullopt, Value(1)}, {"count", I, Value(-1)}},
      [](const Value& p) {
        double period = positive_real(p, "period", "generator");
        std::int64_t count = p.at("count").as_integer();
        if (count < -1) throw ParameterError("generator: count must be -1 or non-negative");
        const Value& v = p.at("value");
        return BehaviorInstance{std::make_shared<stdlib::Generator>(period, v, count),
                                {{"in", Direction::In, v.type()}, {"out", Direction::Out, v.type()}}};
      });

  cat.add_behavior("processor",
                   {{"service_time", R, {}},
                    {"queue_capacity", I, Value(-1)},
                    {"job_type", T, Value("integer")},
                    {"report_load", B, Value(false)}},
                   [](const Value& p) {
                     double service = positive_real(p, "service_time", "processor");
                     std::int64_t cap = p.at("queue_capacity").as_integer();
                     if (cap == 0 || cap < -1) {
                       throw ParameterError(
                           "processor: queue_capacity must be positive or -1 (unbounded)");
                     }
                     ValueType job = type_param(p, "job_type", "processor");
                     bool report = p.at("report_load").as_boolean();
                     std::vector<PortSpec> ports{{"in", Direction::In, job},
                                                 {"done", Direction::Out, job}};
                     if (report) ports.push_back({"load", Direction::Out, ValueType::integer()});
                     return BehaviorInstance{
                         std::make_shared<stdlib::Processor>(service, cap, report), ports};
                   });

  cat.add_behavior("transducer",
                   {{"observation_window", R, {}}, {"job_type", T, Value("integer")}},
                   [](const Value& p) {
                     double window = positive_real(p, "observation_window", "transducer");
                     ValueType job = type_param(p, "job_type", "transducer");
                     return BehaviorInstance{std::make_shared<stdlib::Transducer>(window),
                                             {{"arrived", Direction::In, job},
                                              {"solved", Direction::In, job},
                                              {"report", Direction::Out, stdlib::report_type()}}};
                   });

  cat.add_behavior(
      "router",
      {{"out_ports", T, {}},
       {"policy", T, Value("round_robin")},
       {"field", T, Value("")},
       {"job_type", T, Value("integer")}},
      [](const Value& p) {
        std::vector<std::string> ports = stdlib::split_list(p.at("out_ports").as_text());
        const std::string& policy = p.at("policy").as_text();
        if (policy != "round_robin" && policy != "by_field") {
          throw ParameterError("router: unknown policy '" + policy + "'");
        }
        bool by_field = policy == "by_field";
        if (by_field && p.at("field").as_text().empty()) {
          throw ParameterError("router: by_field needs a field");
        }
        ValueType job = type_param(p, "job_type", "router");
        std::vector<PortSpec> decl{{"in", Direction::In, job},
                                   {"ctl", Direction::In, ValueType::text()}};
        for (const auto& name : ports) {
          if (name == "in" || name == "ctl") {
            throw ParameterError("router: output port name '" + name + "' is reserved");
          }
          decl.push_back({name, Direction::Out, job});
        }
        return BehaviorInstance{
            std::make_shared<stdlib::Router>(ports, by_field, p.at("field").as_text()), decl};
      });

  cat.add_behavior("pool_executive",
                   {{"queue_threshold", I, {}},
                    {"max_workers", I, {}},
                    {"worker_service", R, {}},
                    {"idle_period", R, Value(0.0)},
                    {"initial_workers", I, Value(1)},
                    {"dispatcher", T, Value("disp")},
                    {"worker_prefix", T, Value("w")},
                    {"done_sink", T, Value("")},
                    {"job_type", T, Value("integer")}},
                   [](const Value& p) {
                     stdlib::PoolExecutive::Config c;
                     c.threshold = p.at("queue_threshold").as_integer();
                     c.max_workers = p.at("max_workers").as_integer();
                     c.service = positive_real(p, "worker_service", "pool_executive");
                     c.idle_period = p.at("idle_period").as_real();
                     if (c.idle_period == 0) c.idle_period = c.service;
                     c.initial_workers = p.at("initial_workers").as_integer();
                     c.dispatcher = p.at("dispatcher").as_text();
                     c.prefix = p.at("worker_prefix").as_text();
                     c.done_sink = p.at("done_sink").as_text();
                     c.job_type = type_param(p, "job_type", "pool_executive");
                     if (c.threshold < 0 || c.initial_workers < 1 ||
                         c.max_workers < c.initial_workers || !(c.idle_period > 0) ||
                         std::isinf(c.idle_period)) {
                       throw ParameterError("pool_executive: inconsistent pool parameters");
                     }
                     std::vector<PortSpec> ports{{"ctl", Direction::Out, ValueType::text()}};
                     for (std::int64_t i = 0; i < c.initial_workers; ++i) {
                       ports.push_back({"load_" + c.prefix + std::to_string(i), Direction::In,
                                        ValueType::integer()});
                     }
                     return BehaviorInstance{std::make_shared<stdlib::PoolExecutive>(c), ports};
                   });

  cat.add_initializer("idle_processor", idle_processor_state);
  return cat;
}

}  // namespace dsdevs
