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


#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "dsdevs/dsdevs.hpp"
#include "support/helpers.hpp"

using namespace dsdevs;
namespace dt = dsdevs::testing;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dsdevs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TraceLog trace_of(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("dsdevs_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

const char* kSmall = R"(dsdevs 1
mode classic
policy executive /c/x lenient
stop time 4.5
stop steps 100

root {
  in job : integer
  out res : record{a:integer,b:real}
  atomic g : generator { period = 1 value = "x" count = 3 }
  coupled c {
    in x : integer
    atomic x : processor {
      service_time = 2.5e-1
      in in : integer
      out done : integer
    }
    eic x -> x.in
    select x
  }
  eic job -> c.x
  select c g
}
)";

}  // namespace

TEST(Parser, ReadsEveryConstruct) {
  ModelDocument doc = parse_document(kSmall);
  EXPECT_EQ(doc.mode, Mode::Classic);
  EXPECT_EQ(doc.policy.authority, Authority::ExecutiveOnly);
  EXPECT_EQ(doc.policy.executive.str(), "/c/x");
  EXPECT_EQ(doc.policy.conflict, ConflictMode::Lenient);
  EXPECT_EQ(doc.time_limit, SimTime(4.5));
  EXPECT_EQ(doc.step_limit, 100u);
  ASSERT_EQ(doc.root.ports.size(), 2u);
  EXPECT_EQ(doc.root.ports[1].type.str(), "record{a:integer,b:real}");
  const AtomicSpec& g = doc.root.find("g")->model.atomic();
  EXPECT_EQ(g.params.at("value"), Value("x"));
  EXPECT_EQ(g.params.at("period"), Value(1));
  const CoupledSpec& c = doc.root.find("c")->model.coupled();
  const AtomicSpec& x = c.find("x")->model.atomic();
  EXPECT_EQ(x.params.at("service_time"), Value(0.25));
  ASSERT_TRUE(x.ports.has_value());
  EXPECT_EQ(x.ports->size(), 2u);
  EXPECT_EQ(c.couplings.front().str(), "x->x.in");
  EXPECT_EQ(doc.root.select_order, (std::vector<std::string>{"c", "g"}));
  EXPECT_NO_THROW(validate_document(doc, standard_catalog()));
}

TEST(Parser, RecordsSourceLocations) {
  ModelDocument doc = parse_document(kSmall);
  EXPECT_EQ(doc.locations.at("/|g").line, 10u);
  EXPECT_EQ(doc.locations.at("/c|x|in|in").line, 15u);
  EXPECT_EQ(doc.locations.at("/|job->c.x").line, 21u);
}

TEST(Parser, SyntaxErrorsCarryPositions) {
  auto error_at = [](const std::string& text) -> std::string {
    try {
      parse_document(text);
    } catch (const ParseError& e) {
      return e.where().str();
    }
    return "none";
  };
  EXPECT_EQ(error_at("dsdevs 2\nroot {}\n"), "1:8");
  EXPECT_EQ(error_at("dsdevs 1\nroot {\n  atomic g generator\n}\n"), "3:12");
  EXPECT_EQ(error_at("dsdevs 1\nroot {\n  ic g.out -> out\n}\n"), "3:3");
  EXPECT_EQ(error_at("dsdevs 1\nmode sideways\nroot {}\n"), "2:6");
  EXPECT_EQ(error_at("dsdevs 1\nroot { in x : integer in x : integer }\n"), "none");
  EXPECT_EQ(error_at("dsdevs 1\nroot {}\ntrailing\n"), "3:1");
  EXPECT_EQ(error_at("dsdevs 1\nroot { atomic g : generator { period = \"x }\n"), "2:40");
}

TEST(Validator, TypeMismatchNamesBothEndpoints) {
  auto text = read_file(dt::source_path("tests/data/type_mismatch.dsdevs"));
  try {
    parse_model(text, standard_catalog());
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("10:3: TypeMismatch"), std::string::npos) << msg;
    EXPECT_NE(msg.find("gen.out : integer"), std::string::npos) << msg;
    EXPECT_NE(msg.find("sink.in : boolean"), std::string::npos) << msg;
  }
}

TEST(Validator, ReportsStaticProblems) {
  const Catalog cat = standard_catalog();
  auto reason = [&](const std::string& body, const std::string& head = "") -> std::string {
    try {
      parse_model("dsdevs 1\n" + head + "root {\n" + body + "\n}\n", cat);
    } catch (const ValidationError& e) {
      return e.what();
    }
    return "ok";
  };
  EXPECT_NE(reason("atomic g : generator { period = 1 }\natomic g : generator { period = 1 }")
                .find("DuplicateName"),
            std::string::npos);
  EXPECT_NE(reason("atomic g : generator { period = 1 }\nic g.out -> h.in").find("DanglingCoupling"),
            std::string::npos);
  EXPECT_NE(reason("atomic g : nothing").find("InvalidSpec"), std::string::npos);
  EXPECT_NE(reason("atomic g : generator { period = 1 }", "mode classic\n").find("select"),
            std::string::npos);
  EXPECT_NE(reason("atomic g : generator { period = 1 }", "policy executive /h strict\n")
                .find("executive"),
            std::string::npos);
  EXPECT_EQ(reason("atomic g : generator { period = 1 }"), "ok");
}

TEST(Printer, RoundTripsShippedModels) {
  const Catalog cat = standard_catalog();
  for (const auto& name : dt::shipped_models()) {
    ModelDocument doc = dt::load_model(name, cat);
    ModelDocument again = parse_model(print_document(doc), cat);
    EXPECT_EQ(again, doc) << name;
    EXPECT_EQ(print_document(again), print_document(doc)) << name;
  }
  ModelDocument small = parse_document(kSmall);
  EXPECT_EQ(parse_document(print_document(small)), small);
}

TEST(Printer, FlattenIsAFixpointThroughText) {
  const Catalog cat = standard_catalog();
  for (const auto& name : dt::shipped_models()) {
    ModelDocument doc = dt::load_model(name, cat);
    doc.root = flatten(doc.root);
    ModelDocument reread = parse_model(print_document(doc), cat);
    EXPECT_EQ(flatten(reread.root), doc.root) << name;
  }
}

TEST(Cli, ValidateAndRun) {
  auto v = invoke({"validate", dt::source_path("models/gpt.dsdevs")});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, "ok: 3 components, 3 atomic\n");
  auto r = invoke({"run", dt::source_path("models/gpt.dsdevs"), "--until", "4"});
  EXPECT_EQ(r.code, 0);
  TraceLog t = trace_of(r.out);
  EXPECT_EQ(t.back().str(), "4\thalt\t/\treason=time_limit");
}

TEST(Cli, RunWritesTraceFile) {
  auto path = temp_file("out.trace", "");
  auto r = invoke({"run", dt::source_path("models/gpt_classic.dsdevs"), "--trace", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  TraceLog t = read_trace(in);
  EXPECT_EQ(t.back().at("reason"), "time_limit");
  std::remove(path.c_str());
}

TEST(Cli, ModeOverride) {
  auto p = invoke({"run", dt::source_path("models/gpt.dsdevs"), "--mode", "classic"});
  EXPECT_EQ(p.code, 1);  // classic needs select orders
  EXPECT_NE(p.err.find("select"), std::string::npos);
  auto bad = invoke({"run", dt::source_path("models/gpt.dsdevs"), "--mode", "weird"});
  EXPECT_EQ(bad.code, 3);
}

TEST(Cli, RuntimeErrorExitsTwoAndKeepsTheTrace) {
  auto path = temp_file("loop.dsdevs", R"(dsdevs 1
root {
  atomic g : generator { period = 1 count = 1 }
  atomic r : router { out_ports = "a" }
  ic g.out -> r.in
  ic r.a -> r.in
}
)");
  auto res = invoke({"run", path});
  EXPECT_EQ(res.code, 2);
  EXPECT_NE(res.err.find("transitions at time 1"), std::string::npos);
  EXPECT_EQ(trace_of(res.out).back().at("code"), "livelock_suspected");
  std::remove(path.c_str());
}

TEST(Cli, FlattenPrintsAValidModel) {
  auto res = invoke({"flatten", dt::source_path("models/gpt_nested.dsdevs")});
  ASSERT_EQ(res.code, 0) << res.err;
  ModelDocument doc = parse_model(res.out, standard_catalog());
  EXPECT_NE(doc.root.find("ef/gen"), nullptr);
}

TEST(Cli, AuditReadsARecordedTrace) {
  auto path = temp_file("pool.trace", "");
  ASSERT_EQ(invoke({"run", dt::source_path("models/worker_pool.dsdevs"), "--trace", path}).code, 0);
  auto before = invoke({"audit", path, "--at", "1"});
  auto during = invoke({"audit", path, "--at", "1.5"});
  EXPECT_EQ(during.code, 0);
  EXPECT_EQ(before.out.find("model /w1 "), std::string::npos);
  EXPECT_NE(during.out.find("model /w1 atomic processor"), std::string::npos) << during.out;
  EXPECT_EQ(invoke({"audit", path, "--at", "-1"}).code, 3);
  auto broken = temp_file("broken.trace", "1\tnot_a_kind\t/\t\n");
  EXPECT_EQ(invoke({"audit", broken, "--at", "1"}).code, 1);
  std::remove(path.c_str());
  std::remove(broken.c_str());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 3);
  EXPECT_EQ(invoke({"run"}).code, 3);
  EXPECT_EQ(invoke({"run", "/nonexistent/model.dsdevs"}).code, 3);
  EXPECT_EQ(invoke({"frobnicate"}).code, 3);
  EXPECT_EQ(invoke({"score", "--assessments", "x"}).code, 3);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}
