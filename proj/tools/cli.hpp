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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsdevs/dsdevs.hpp"

namespace dsdevs::cli {

enum Exit { kOk = 0, kInvalid = 1, kRuntime = 2, kUsage = 3 };

namespace detail {

inline ModelDocument load(const std::string& path, const Catalog& catalog,
                          std::optional<Mode> mode = std::nullopt) {
  ModelDocument doc = parse_document(read_file(path));
  if (mode) doc.mode = *mode;
  validate_document(doc, catalog);
  return doc;
}

inline std::optional<Mode> parse_mode(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "classic") return Mode::Classic;
  if (s == "parallel") return Mode::Parallel;
  throw UsageError("--mode must be classic or parallel");
}

inline SimTime parse_time(const std::string& s, const std::string& flag) {
  auto t = SimTime::parse(s);
  if (!t) throw UsageError(flag + " expects a non-negative time, got '" + s + "'");
  return *t;
}

}  // namespace detail

// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic-structure discrete-event simulation kernel", "dsdevs"};
  app.require_subcommand(1);

  std::string model, trace_out, mode_text, until_text;
  auto* run_cmd = app.add_subcommand("run", "simulate a model and write its trace");
  run_cmd->add_option("model", model, "model file")->required();
  run_cmd->add_option("--trace", trace_out, "write the trace here instead of stdout");
  run_cmd->add_option("--mode", mode_text, "override the mode: classic or parallel");
  run_cmd->add_option("--until", until_text, "stop after the last event at or before T");

  auto* validate_cmd = app.add_subcommand("validate", "check a model file");
  validate_cmd->add_option("model", model, "model file")->required();

  auto* flatten_cmd = app.add_subcommand("flatten", "print the single-level equivalent");
  flatten_cmd->add_option("model", model, "model file")->required();

  std::string trace_in, at_text;
  auto* audit_cmd = app.add_subcommand("audit", "structure recorded in a trace at time T");
  audit_cmd->add_option("trace", trace_in, "trace file")->required();
  audit_cmd->add_option("--at", at_text, "time")->required();

  std::string criteria_file, assessments_file;
  bool preset = false, check = false;
  double perturbation = 0;
  auto* score_cmd = app.add_subcommand("score", "weighted conformity scoring");
  score_cmd->add_option("--criteria", criteria_file, "criteria file");
  score_cmd->add_option("--assessments", assessments_file, "assessments file")->required();
  score_cmd->add_flag("--paper-preset", preset, "use the published criteria and weights");
  score_cmd->add_flag("--paper-check", check, "check the published textual constraints");
  auto* sens = score_cmd->add_option("--sensitivity", perturbation, "relative weight change p");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  const Catalog catalog = standard_catalog();
  try {
    if (*validate_cmd) {
      ModelDocument doc = detail::load(model, catalog);
      out << "ok: " << doc.root.components.size() << " components, "
          << count_atomics(doc.root) << " atomic\n";
      return kOk;
    }

    if (*flatten_cmd) {
      ModelDocument doc = detail::load(model, catalog);
      doc.root = flatten(doc.root);
      out << print_document(doc);
      return kOk;
    }

    if (*audit_cmd) {
      SimTime at = detail::parse_time(at_text, "--at");
      std::ifstream in(trace_in, std::ios::binary);
      if (!in) throw UsageError("cannot read '" + trace_in + "'");
      StructureHistory h = structure_audit(read_trace(in));
      out << "# structure at " << at.str() << "\n" << h.at(at).str();
      return kOk;
    }

    if (*score_cmd) {
      if (preset == !criteria_file.empty()) {
        throw UsageError("score needs exactly one of --criteria and --paper-preset");
      }
      auto criteria = preset ? scoring::paper_preset()
                             : scoring::parse_criteria(read_file(criteria_file));
      auto assessments = scoring::parse_assessments(read_file(assessments_file));
      auto board = scoring::score(criteria, assessments);
      out << scoring::render_table(board) << scoring::render_lines(board);
      if (*sens) {
        out << scoring::render_sensitivity(scoring::sensitivity(criteria, assessments, perturbation));
      }
      if (check) {
        auto bad = scoring::paper_check(criteria, assessments);
        for (const auto& b : bad) out << "paper_check\tviolation\t" << b << "\n";
        if (!bad.empty()) return kInvalid;
        out << "paper_check\tpass\n";
      }
      return kOk;
    }

    // run
    ModelDocument doc = detail::load(model, catalog, detail::parse_mode(mode_text));
    RunConfig cfg = doc.config();
    if (!until_text.empty()) cfg.time_limit = detail::parse_time(until_text, "--until");
    std::ofstream file;
    if (!trace_out.empty()) {
      file.open(trace_out, std::ios::binary);
      if (!file) throw UsageError("cannot write '" + trace_out + "'");
    }
    std::ostream& sink = trace_out.empty() ? out : file;
    RootCoordinator root(doc.root, catalog, cfg);
    int code = kOk;
    try {
      root.run();
    } catch (const Error& e) {
      err << "simulation error: " << e.what() << "\n";
      code = kRuntime;
    }
    write_trace(root.trace(), sink);
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const ParameterError& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

}  // namespace dsdevs::cli
