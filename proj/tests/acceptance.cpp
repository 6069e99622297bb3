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


// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "dsdevs/dsdevs.hpp"
#include "support/helpers.hpp"

using namespace dsdevs;
namespace dt = dsdevs::testing;

namespace {

// Collects the reasons a criterion failed.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  bool failed() const { return failed_; }
  std::string detail() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + f;
    return out;
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string events_text(const std::vector<dt::Event>& events) {
  std::string out;
  for (const auto& e : events) out += e.time + " " + e.model + " " + e.port + " " + e.value + "\n";
  return out;
}

std::vector<std::string> times_of(const TraceLog& t, const std::string& model,
                                  const std::string& port) {
  std::vector<std::string> out;
  for (const auto& r : t) {
    if (r.kind == TraceKind::Output && r.model == model && r.at("port") == port) {
      out.push_back(r.time.str());
    }
  }
  return out;
}

using Strings = std::vector<std::string>;

// ---------------------------------------------------------------------------

void gpt_end_to_end(Check& c) {
  Catalog cat = standard_catalog();
  auto doc = dt::load_model("gpt", cat);
  auto t0 = std::chrono::steady_clock::now();
  RootCoordinator root(doc.root, cat, doc.config());
  TraceLog trace = root.run();
  double elapsed = seconds_since(t0);

  auto got = dt::outputs_of(trace);
  auto want = dt::gpt_oracle(2.0, 1.0, 10.0, 11.0);
  c.expect(got == want, "trace differs from the oracle:\n" + events_text(got) + "vs\n" +
                            events_text(want));
  c.expect(times_of(trace, "/gen", "out") == Strings{"2", "4", "6", "8", "10"}, "generation times");
  c.expect(times_of(trace, "/proc", "done") == Strings{"3", "5", "7", "9", "11"}, "done times");
  Strings reports;
  for (const auto& r : trace) {
    if (r.kind == TraceKind::Output && r.model == "/trans") {
      reports.push_back(r.time.str() + " " + r.at("value"));
    }
  }
  c.expect(reports == Strings{"10 {arrived=5,solved=4,throughput=0.4}"}, "transducer report");
  c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
}

// ---------------------------------------------------------------------------

// Processor that counts its confluent transitions.
class CountingProcessor : public AtomicBehavior {
 public:
  CountingProcessor(std::shared_ptr<const AtomicBehavior> inner, std::atomic<int>* calls)
      : inner_(std::move(inner)), calls_(calls) {}
  Value initial_state() const override { return inner_->initial_state(); }
  Value delta_int(const Value& s) const override { return inner_->delta_int(s); }
  Value delta_ext(const Value& s, SimTime e, const Bag& x) const override {
    return inner_->delta_ext(s, e, x);
  }
  Value delta_con(const Value& s, const Bag& x) const override {
    ++*calls_;
    return inner_->delta_con(s, x);
  }
  Bag output(const Value& s) const override { return inner_->output(s); }
  SimTime time_advance(const Value& s) const override { return inner_->time_advance(s); }

 private:
  std::shared_ptr<const AtomicBehavior> inner_;
  std::atomic<int>* calls_;
};

void confluent_collision(Check& c) {
  std::atomic<int> calls{0};
  Catalog cat = standard_catalog();
  const auto& proc = cat.entry("processor");
  cat.add_behavior("counting_processor", proc.schema, [&calls, factory = proc.factory](const Value& p) {
    BehaviorInstance inst = factory(p);
    inst.behavior = std::make_shared<CountingProcessor>(inst.behavior, &calls);
    return inst;
  });

  // Jobs at 2 and 4; the first finishes at 4, exactly when the second lands.
  CoupledSpec top;
  top.components.push_back(
      {"gen", AtomicSpec{"generator", Value::record({{"period", 2.0}, {"count", 2}}), std::nullopt}});
  top.components.push_back(
      {"proc", AtomicSpec{"counting_processor", Value::record({{"service_time", 2.0}}), std::nullopt}});
  top.add_coupling({{"gen", "out"}, {"proc", "in"}});
  top.select_order = {"gen", "proc"};

  TraceLog par = dt::run_spec(top, cat, RunConfig{});
  Strings confluent;
  for (const auto& r : par) {
    if (r.kind == TraceKind::Confluent) confluent.push_back(r.time.str() + " " + r.model);
  }
  c.expect(confluent == Strings{"4 /proc"}, "confluent records: " + std::to_string(confluent.size()));
  c.expect(times_of(par, "/proc", "done") == Strings{"4", "6"}, "completion emitted in the colliding step");
  c.expect(calls.load() == 1, "delta_con calls: " + std::to_string(calls.load()));

  // Classic mode, with the generator fanned into two ports of the processor.
  CoupledSpec fan = top;
  fan.components[1].model.atomic().ports = std::vector<PortSpec>{
      {"in", Direction::In, ValueType::integer()},
      {"in2", Direction::In, ValueType::integer()},
      {"done", Direction::Out, ValueType::integer()}};
  fan.add_coupling({{"gen", "out"}, {"proc", "in2"}});
  RunConfig classic;
  classic.mode = Mode::Classic;
  RootCoordinator root(fan, cat, classic);
  bool raised = false;
  try {
    root.run();
  } catch (const ClassicSemanticsViolation&) {
    raised = true;
  }
  c.expect(raised, "classic fan-in did not raise ClassicSemanticsViolation");
}

// ---------------------------------------------------------------------------

void worker_pool(Check& c) {
  Catalog cat = standard_catalog();
  auto doc = dt::load_model("worker_pool", cat);
  RunConfig cfg = doc.config();
  cfg.check_structure = true;
  RootCoordinator root(doc.root, cat, cfg);

  struct Seen {
    SimTime clock, t_last, t_next;
    Value state;
  };
  std::optional<Seen> first;
  root.set_observer([&](const RootCoordinator& r) {
    if (first) return;
    if (auto* w = r.top().child("w1")) {
      const auto& a = static_cast<const AtomicProcessor&>(*w);
      first = Seen{r.clock(), a.t_last(), a.t_next(), a.state()};
    }
  });
  TraceLog t;
  try {
    root.run();
    t = root.trace();
  } catch (const Error& e) {
    c.expect(false, std::string("run failed: ") + e.what());
    return;
  }

  Strings adds;
  for (const auto& r : t) {
    if (r.kind == TraceKind::StructureAddModel) adds.push_back(r.time.str() + " " + r.model);
  }
  c.expect(adds == Strings{"1.5 /w1"}, "structure_add_model records: " + std::to_string(adds.size()));

  // Hand-computed initial state of the new worker: an empty queue, created
  // at 1.5, one queueing peer (w0). An idle processor is passive.
  c.expect(first.has_value(), "w1 never appeared");
  if (first) {
    c.expect(first->clock == SimTime(1.5), "inserted at " + first->clock.str());
    c.expect(first->t_last == SimTime(1.5), "t_last " + first->t_last.str());
    c.expect(first->state.at("created_at") == Value(1.5), "created_at");
    c.expect(first->state.at("peers") == Value(1), "peers " + first->state.at("peers").str());
    c.expect(first->state.at("queue") == Value::record({}), "queue not empty");
    c.expect(first->t_next.is_infinite(), "t_next " + first->t_next.str());
  }
  c.expect(check_well_formed(root.top()).empty(), "final structure not well formed");

  // Removal at 6: cascaded coupling removals, then the model, then ports.
  Strings at6;
  for (const auto& r : t) {
    if (r.time == SimTime(6.0) && is_structure(r.kind)) {
      at6.push_back(std::string(to_string(r.kind)) + " " +
                    (r.get("coupling") ? r.at("coupling") : r.model));
    }
  }
  Strings want6{"structure_remove_coupling disp.w1->w1.in",
                "structure_remove_coupling w1.done->done",
                "structure_remove_coupling w1.load->exec.load_w1",
                "structure_remove_model /w1",
                "structure_port /disp",
                "structure_port /exec"};
  std::string got6;
  for (const auto& s : at6) got6 += s + "\n";
  c.expect(at6 == want6, "removal order at 6:\n" + got6);

  // Jobs at 0.5, 1, 1.5, 2; w0 serves three back to back from 0.5, job 4
  // goes to w1 at 2.
  c.expect(times_of(t, "/", "done") == Strings{"2.5", "4", "4.5", "6.5"}, "completion schedule");
  Strings ctl;
  for (const auto& r : t) {
    if (r.kind == TraceKind::Output && r.model == "/exec") ctl.push_back(r.time.str() + r.at("value"));
  }
  c.expect(ctl == Strings{"1.5\"+w1\"", "6\"-w1\""}, "ctl schedule");
  c.expect(t.back().str() == "6.5\thalt\t/\treason=all_passive", "halt: " + t.back().str());
}

// ---------------------------------------------------------------------------

bool classic_legal(const CoupledSpec& spec, const Catalog& cat) {
  return validate_spec(spec, cat, true).empty();
}

void compare_flat(Check& c, const std::string& label, const CoupledSpec& spec, const Catalog& cat,
                  RunConfig cfg, int& compared) {
  for (Mode mode : {Mode::Parallel, Mode::Classic}) {
    if (mode == Mode::Classic && !classic_legal(spec, cat)) continue;
    cfg.mode = mode;
    TraceLog hier = dt::run_spec(spec, cat, cfg);
    if (mode == Mode::Classic && !hier.empty() &&
        hier.back().get("code") && hier.back().at("code") == "classic_semantics_violation") {
      continue;
    }
    TraceLog flat = dt::run_spec(flatten(spec), cat, cfg);
    ++compared;
    c.expect(dt::normalized(hier) == dt::normalized(flat),
             label + " differs in " + std::string(to_string(mode)) + " mode");
  }
}

void flatten_equivalence(Check& c) {
  auto t0 = std::chrono::steady_clock::now();
  Catalog cat = standard_catalog();
  int compared = 0;
  for (const auto& name : dt::shipped_models()) {
    auto doc = dt::load_model(name, cat);
    compare_flat(c, name, doc.root, cat, doc.config(), compared);
  }
  dt::RandomModels gen(2026);
  for (int i = 0; i < 100; ++i) {
    CoupledSpec spec = gen.next(cat);
    RunConfig cfg;
    cfg.time_limit = SimTime(12.0);
    compare_flat(c, "random model " + std::to_string(i), spec, cat, cfg, compared);
  }
  double elapsed = seconds_since(t0);
  c.expect(compared >= 105, "only " + std::to_string(compared) + " comparisons");
  c.expect(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
}

// ---------------------------------------------------------------------------

std::string run_cli_to_file(const std::string& model, const std::string& out) {
  std::vector<std::string> args{"dsdevs", "run", model, "--trace", out};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  std::ifstream in(out, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return std::to_string(code) + "\n" + bytes;
}

void determinism(Check& c) {
  auto dir = std::filesystem::temp_directory_path();
  for (const auto& name : dt::shipped_models()) {
    std::string model = dt::source_path("models/" + name + ".dsdevs");
    auto a = (dir / ("dsdevs_det_a_" + name + ".trace")).string();
    auto b = (dir / ("dsdevs_det_b_" + name + ".trace")).string();
    std::string first = run_cli_to_file(model, a);
    std::string second = run_cli_to_file(model, b);
    c.expect(first.rfind("0\n", 0) == 0, name + " did not run cleanly");
    c.expect(first.size() > 100, name + " produced almost no trace");
    c.expect(first == second, name + " traces differ between runs");
    std::remove(a.c_str());
    std::remove(b.c_str());
  }
}

// ---------------------------------------------------------------------------

void scorer(Check& c) {
  using namespace scoring;
  auto preset = paper_preset();
  c.expect(weight_sum(preset) == 11.0, "preset weights sum to " + std::to_string(weight_sum(preset)));
  Assessment ones{"ones", {}};
  for (const auto& k : preset) ones.values[k.name] = 1.0;
  c.expect(score(preset, {ones}).entries[0].total == 11.0, "all-ones total");

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> weight(0.01, 10), value(0, 1), factor(0.01, 100);
  std::uniform_int_distribution<int> count(1, 6);
  auto random_case = [&](std::vector<Criterion>& cs, std::vector<Assessment>& as) {
    cs.clear();
    as.clear();
    int nc = count(rng), na = count(rng);
    for (int i = 0; i < nc; ++i) cs.push_back({"c" + std::to_string(i), weight(rng)});
    for (int j = 0; j < na; ++j) {
      Assessment a{"a" + std::to_string(j), {}};
      for (const auto& k : cs) a.values[k.name] = value(rng);
      as.push_back(a);
    }
  };

  int homogeneity = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Criterion> cs;
    std::vector<Assessment> as;
    random_case(cs, as);
    double k = factor(rng);
    auto scaled = cs;
    for (auto& w : scaled) w.weight *= k;
    auto base = score(cs, as), big = score(scaled, as);
    bool ok = true;
    for (const auto& e : base.entries) {
      const auto* s = big.find(e.approach);
      ok = ok && std::abs(s->total - k * e.total) <= 1e-9 * k * std::max(1.0, base.max_total) &&
           s->rank == e.rank;
    }
    homogeneity += ok;
  }
  c.expect(homogeneity == 1000, "homogeneity held in " + std::to_string(homogeneity) + "/1000");

  int monotone = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Criterion> cs;
    std::vector<Assessment> as;
    random_case(cs, as);
    auto before = score(cs, as);
    auto& a = as[static_cast<std::size_t>(i) % as.size()];
    const auto& k = cs[static_cast<std::size_t>(i) % cs.size()];
    double& v = a.values[k.name];
    v += (1 - v) * value(rng);
    auto after = score(cs, as);
    const auto* x = before.find(a.approach);
    const auto* y = after.find(a.approach);
    monotone += y->total >= x->total && y->rank <= x->rank;
  }
  c.expect(monotone == 1000, "monotonicity held in " + std::to_string(monotone) + "/1000");

  auto file = [](const std::string& n) {
    return parse_assessments(read_file(dt::source_path("tests/data/" + n)));
  };
  c.expect(paper_check(preset, file("assessments_ok.dsdevs")).empty(), "preset check rejected valid set");
  c.expect(!paper_check(preset, file("assessments_bad_order.dsdevs")).empty(),
           "preset check accepted Cell-DEVS above DynDEVS");
  c.expect(!paper_check(preset, file("assessments_bad_band.dsdevs")).empty(),
           "preset check accepted a score outside the band");
}

// ---------------------------------------------------------------------------

class NegativeAdvance : public AtomicBehavior {
 public:
  Value initial_state() const override { return Value::record({{"n", 0}}); }
  Value delta_int(const Value& s) const override { return s.with("n", 1); }
  Value delta_ext(const Value& s, SimTime, const Bag&) const override { return s; }
  Bag output(const Value&) const override { return {}; }
  SimTime time_advance(const Value& s) const override {
    return s.at("n").as_integer() == 0 ? SimTime(1.0) : SimTime(-1.0);
  }
};

void property_suite(Check& c) {
  auto t0 = std::chrono::steady_clock::now();
  Catalog cat = standard_catalog();
  dt::RandomModels gen(7);
  std::uint64_t steps = 0;
  int models = 0;
  while (steps < 1000) {
    CoupledSpec spec = gen.next(cat);
    RunConfig cfg;
    cfg.step_limit = 60;
    RootCoordinator root(spec, cat, cfg);
    SimTime last_clock = SimTime::zero();
    std::map<std::string, SimTime> t_last;
    const std::string label = "model " + std::to_string(models);
    root.set_observer([&](const RootCoordinator& r) {
      c.expect(r.clock() >= last_clock, label + ": clock went back at " + r.clock().str());
      last_clock = r.clock();
      std::string where;
      c.expect(dt::t_next_consistent(r.top(), where), label + ": t_next not the minimum at " + where);
      for (const AtomicProcessor* a : atomics_of(r.top())) {
        auto key = a->path().str();
        c.expect(a->t_last() <= r.clock(), label + ": t_last ahead of the clock at " + key);
        auto it = t_last.find(key);
        c.expect(it == t_last.end() || it->second <= a->t_last(), label + ": t_last went back at " + key);
        c.expect(a->t_next() >= a->t_last(), label + ": t_next before t_last at " + key);
        t_last[key] = a->t_last();
      }
    });
    try {
      root.run();
    } catch (const Error& e) {
      c.expect(false, label + ": " + e.what());
    }
    const auto& st = root.stats();
    c.expect(st.delivered + st.discarded == dt::expected_copies(spec, root.trace()),
             label + ": delivered + discarded != expected copies");
    std::uint64_t emitted = 0;
    for (const auto& r : root.trace()) emitted += r.kind == TraceKind::Output && r.model != "/";
    c.expect(st.emitted == emitted, label + ": emitted count");
    steps += st.steps;
    ++models;
  }

  // A negative time advance is a contract violation.
  Catalog bad = standard_catalog();
  bad.add_behavior("negative", {}, [](const Value&) {
    return BehaviorInstance{std::make_shared<NegativeAdvance>(), {}};
  });
  CoupledSpec neg;
  neg.components.push_back({"n", AtomicSpec{"negative", Value::record({}), std::nullopt}});
  bool contract = false;
  try {
    RootCoordinator(neg, bad).run();
  } catch (const ModelContractViolation&) {
    contract = true;
  }
  c.expect(contract, "negative ta accepted");

  // A router feeding itself loops at one instant.
  CoupledSpec loop;
  loop.components.push_back(
      {"g", AtomicSpec{"generator", Value::record({{"period", 1.0}, {"count", 1}}), std::nullopt}});
  loop.components.push_back(
      {"r", AtomicSpec{"router", Value::record({{"out_ports", "a"}}), std::nullopt}});
  loop.add_coupling({{"g", "out"}, {"r", "in"}});
  loop.add_coupling({{"r", "a"}, {"r", "in"}});
  bool livelock = false;
  try {
    RootCoordinator(loop, cat).run();
  } catch (const LivelockSuspected&) {
    livelock = true;
  }
  c.expect(livelock, "router self-loop not caught");

  double elapsed = seconds_since(t0);
  c.expect(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"GPT end-to-end", gpt_end_to_end},
      {"confluent collision", confluent_collision},
      {"dynamic worker pool", worker_pool},
      {"flattening equivalence", flatten_equivalence},
      {"determinism", determinism},
      {"scorer arithmetic", scorer},
      {"kernel property suite", property_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("unexpected exception: ") + e.what());
    }
    std::cout << (c.failed() ? "FAIL" : "PASS") << " " << (i + 1) << " " << criteria[i].first;
    if (c.failed()) std::cout << ": " << c.detail();
    std::cout << "\n";
    failed += c.failed();
  }
  return failed == 0 ? 0 : 1;
}
