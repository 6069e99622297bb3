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
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dsdevs/dsdevs.hpp"

#ifndef DSDEVS_SOURCE_DIR
#define DSDEVS_SOURCE_DIR "."
#endif

namespace dsdevs::testing {

inline std::string source_path(const std::string& rel) {
  return std::string(DSDEVS_SOURCE_DIR) + "/" + rel;
}

inline const std::vector<std::string>& shipped_models() {
  static const std::vector<std::string> names{"gpt", "gpt_nested", "gpt_classic", "worker_pool",
                                              "worker_pool_executive"};
  return names;
}

inline ModelDocument load_model(const std::string& name, const Catalog& catalog) {
  return parse_model(read_file(source_path("models/" + name + ".dsdevs")), catalog);
}

// Runs to completion; kernel errors stay in the trace as error records.
inline TraceLog run_spec(const CoupledSpec& spec, const Catalog& catalog, RunConfig cfg) {
  RootCoordinator root(spec, catalog, cfg);
  try {
    root.run();
  } catch (const Error&) {
  }
  return root.trace();
}

// Hierarchy-independent view of a trace: coupled-model and coupling init
// records go, and so does the parent key.
inline std::string normalized(const TraceLog& trace) {
  TraceLog out;
  for (auto r : trace) {
    if (r.kind == TraceKind::Init) {
      if (r.payload.count("coupling")) continue;
      auto type = r.payload.find("type");
      if (type != r.payload.end() && type->second == "coupled") continue;
    }
    r.payload.erase("parent");
    out.push_back(std::move(r));
  }
  return trace_text(out);
}

// ---------------------------------------------------------------------------
// Random small models: at most three levels and six atomics, integer job
// ports everywhere, random type-correct couplings and select orders.

class RandomModels {
 public:
  explicit RandomModels(std::uint32_t seed) : rng_(seed) {}

  CoupledSpec next(const Catalog& catalog) {
    atomics_ = 0;
    CoupledSpec top = coupled(1, catalog, true);
    return top;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  ModelSpec atomic() {
    ++atomics_;
    switch (pick(0, 3)) {
      case 0:
        return AtomicSpec{"generator",
                          Value::record({{"period", pick(std::vector<double>{0.5, 1.0, 1.5, 2.0})},
                                         {"count", pick(-1, 4)}}),
                          std::nullopt};
      case 1:
        return AtomicSpec{"processor",
                          Value::record({{"service_time", pick(std::vector<double>{0.5, 1.0, 2.0})},
                                         {"queue_capacity", pick(std::vector<int>{-1, 1, 2})},
                                         {"report_load", pick(0, 2) == 0}}),
                          std::nullopt};
      case 2:
        return AtomicSpec{"transducer",
                          Value::record({{"observation_window",
                                          pick(std::vector<double>{3.0, 5.0, 10.0})}}),
                          std::nullopt};
      default:
        return AtomicSpec{"router", Value::record({{"out_ports", pick(std::vector<std::string>{"a", "a,b"})}}),
                          std::nullopt};
    }
  }

  CoupledSpec coupled(int level, const Catalog& catalog, bool top) {
    CoupledSpec spec;
    int n_in = pick(top ? 0 : 1, 2), n_out = pick(top ? 0 : 1, 2);
    for (int i = 0; i < n_in; ++i) spec.ports.push_back({"i" + std::to_string(i), Direction::In, ValueType::integer()});
    for (int i = 0; i < n_out; ++i) spec.ports.push_back({"o" + std::to_string(i), Direction::Out, ValueType::integer()});
    if (top && pick(0, 1)) spec.ports.push_back({"rep", Direction::Out, stdlib::report_type()});

    int n = pick(1, 3);
    for (int i = 0; i < n && atomics_ < 6; ++i) {
      std::string name = "m" + std::to_string(i);
      if (level < 3 && atomics_ < 5 && pick(0, 3) == 0) {
        spec.components.push_back({name, ModelSpec(coupled(level + 1, catalog, false))});
      } else {
        spec.components.push_back({name, atomic()});
      }
    }
    if (spec.components.empty()) spec.components.push_back({"m0", atomic()});

    // Candidate endpoints by type.
    std::vector<std::pair<Endpoint, ValueType>> sources, sinks;
    for (const auto& p : spec.ports) {
      if (p.direction == Direction::In) sources.push_back({{"", p.name}, p.type});
      else sinks.push_back({{"", p.name}, p.type});
    }
    for (const auto& c : spec.components) {
      auto ports = c.model.is_atomic() ? catalog.ports_of(c.model.atomic()) : c.model.coupled().ports;
      for (const auto& p : ports) {
        if (p.type == ValueType::text()) continue;  // leave router ctl alone
        if (p.direction == Direction::Out) sources.push_back({{c.name, p.name}, p.type});
        else sinks.push_back({{c.name, p.name}, p.type});
      }
    }
    int tries = pick(2, 8);
    for (int i = 0; i < tries && !sources.empty() && !sinks.empty(); ++i) {
      const auto& [from, ft] = pick(sources);
      const auto& [to, tt] = pick(sinks);
      if (!(ft == tt)) continue;
      Coupling cp{from, to};
      if (from.is_network() && to.is_network()) continue;
      if (!from.is_network() && from.component == to.component && from.port == to.port) continue;
      spec.add_coupling(cp);
    }
    for (const auto& c : spec.components) spec.select_order.push_back(c.name);
    std::shuffle(spec.select_order.begin(), spec.select_order.end(), rng_);
    return spec;
  }

  std::mt19937 rng_;
  int atomics_ = 0;
};

// ---------------------------------------------------------------------------
// Independent oracles.

// Routing fan-out per (atomic path, output port), read off the flattened
// specification rather than the live tree: leaf destinations plus root
// output ports.
inline std::map<std::pair<std::string, std::string>, std::size_t> fanout(const CoupledSpec& spec) {
  std::map<std::pair<std::string, std::string>, std::size_t> out;
  for (const auto& c : flatten(spec).couplings) {
    if (c.from.is_network()) continue;
    ++out[{"/" + c.from.component, c.from.port}];
  }
  return out;
}

// Delivered plus discarded copies the kernel should report: each emission
// reaches all of its destinations, or is discarded once when it has none.
inline std::uint64_t expected_copies(const CoupledSpec& spec, const TraceLog& trace) {
  auto fan = fanout(spec);
  std::uint64_t total = 0;
  for (const auto& r : trace) {
    if (r.kind != TraceKind::Output || r.model == "/") continue;
    auto it = fan.find({r.model, r.at("port")});
    total += (it == fan.end() || it->second == 0) ? 1 : it->second;
  }
  return total;
}

// Every coordinator's t_next is the minimum of its children's.
inline bool t_next_consistent(const Coordinator& c, std::string& where) {
  SimTime m = SimTime::infinity();
  for (const auto& [name, child] : c.children()) {
    if (!child->is_atomic() &&
        !t_next_consistent(static_cast<const Coordinator&>(*child), where)) {
      return false;
    }
    m = std::min(m, child->t_next());
  }
  if (m != c.t_next()) {
    where = c.path().str();
    return false;
  }
  return true;
}

// One emission, as predicted by an oracle or read from a trace.
struct Event {
  std::string time;
  std::string model;
  std::string port;
  std::string value;
  friend auto operator<=>(const Event&, const Event&) = default;
};

// Time (numerically), then model, port and value.
inline void sort_events(std::vector<Event>& events) {
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    double ta = *SimTime::parse(a.time) == SimTime::infinity() ? 1e300 : SimTime::parse(a.time)->value();
    double tb = *SimTime::parse(b.time) == SimTime::infinity() ? 1e300 : SimTime::parse(b.time)->value();
    if (ta != tb) return ta < tb;
    return std::tie(a.model, a.port, a.value) < std::tie(b.model, b.port, b.value);
  });
}

inline std::vector<Event> outputs_of(const TraceLog& trace) {
  std::vector<Event> out;
  for (const auto& r : trace) {
    if (r.kind == TraceKind::Output) out.push_back({r.time.str(), r.model, r.at("port"), r.at("value")});
  }
  sort_events(out);
  return out;
}

// Event-list simulation of generator -> processor -> transducer written
// without the kernel. The agenda is ordered by time, then by priority so the
// report at the window end sees every arrival and completion at that time.
inline std::vector<Event> gpt_oracle(double period, double service, double window, double limit) {
  enum Kind { Generate = 0, Complete = 0, Report = 1 };
  std::multimap<std::pair<double, int>, bool> agenda;  // value: true = generate
  agenda.insert({{period, Generate}, true});
  agenda.insert({{window, Report}, false});
  std::vector<Event> out;
  int queue = 0, arrived = 0, solved = 0;
  auto fmt = [](double t) { return SimTime(t).str(); };
  while (!agenda.empty() && agenda.begin()->first.first <= limit) {
    auto [key, generate] = *agenda.begin();
    auto [t, prio] = key;
    agenda.erase(agenda.begin());
    if (prio == Report) {
      std::string v = "{arrived=" + std::to_string(arrived) + ",solved=" + std::to_string(solved) +
                      ",throughput=" + Value::render_real(solved / window) + "}";
      out.push_back({fmt(t), "/trans", "report", v});
      out.push_back({fmt(t), "/", "report", v});
    } else if (generate) {
      out.push_back({fmt(t), "/gen", "out", "1"});
      if (t <= window) ++arrived;
      if (queue++ == 0) agenda.insert({{t + service, Complete}, false});
      agenda.insert({{t + period, Generate}, true});
    } else {
      out.push_back({fmt(t), "/proc", "done", "1"});
      if (t <= window) ++solved;
      if (--queue > 0) agenda.insert({{t + service, Complete}, false});
    }
  }
  sort_events(out);
  return out;
}

}  // namespace dsdevs::testing
