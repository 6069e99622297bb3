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
#include <cctype>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsdevs/error.hpp"
#include "dsdevs/model_io.hpp"

namespace dsdevs::scoring {

struct Criterion {
  std::string name;
  double weight = 1;
};

struct Assessment {
  std::string approach;
  std::map<std::string, double> values;  // criterion -> conformity in [0, 1]
};

struct ScoreEntry {
  std::string approach;
  double total = 0;
  std::size_t rank = 0;  // competition ranking: 1 + number of clearly better approaches
};

struct ScoreBoard {
  std::vector<ScoreEntry> entries;             // by rank, then approach name
  std::vector<std::vector<std::string>> ties;  // every rank shared by two or more approaches
  double max_total = 0;                        // sum of the weights
  double tolerance = 0;

  const ScoreEntry* find(const std::string& approach) const {
    for (const auto& e : entries) {
      if (e.approach == approach) return &e;
    }
    return nullptr;
  }

  std::set<std::string> top() const {
    std::set<std::string> out;
    for (const auto& e : entries) {
      if (e.rank == 1) out.insert(e.approach);
    }
    return out;
  }
};

// decision_authority 3, structure_information 3, ports_existence 4,
// ports_modification 1.
inline std::vector<Criterion> paper_preset() {
  return {{"decision_authority", 3},
          {"structure_information", 3},
          {"ports_existence", 4},
          {"ports_modification", 1}};
}

inline double weight_sum(const std::vector<Criterion>& criteria) {
  double s = 0;
  for (const auto& c : criteria) s += c.weight;
  return s;
}

// Totals closer than this are tied.
inline double tie_tolerance(const std::vector<Criterion>& criteria) {
  return 1e-9 * std::max(1.0, weight_sum(criteria));
}

inline void check_inputs(const std::vector<Criterion>& criteria,
                         const std::vector<Assessment>& assessments) {
  std::set<std::string> names;
  for (const auto& c : criteria) {
    if (!(c.weight > 0) || std::isinf(c.weight)) {
      throw ValidationError("criterion '" + c.name + "' needs a positive finite weight");
    }
    if (!names.insert(c.name).second) throw ValidationError("duplicate criterion '" + c.name + "'");
  }
  std::set<std::string> approaches;
  for (const auto& a : assessments) {
    if (!approaches.insert(a.approach).second) {
      throw ValidationError("duplicate approach '" + a.approach + "'");
    }
    for (const auto& [k, v] : a.values) {
      if (!names.count(k)) {
        throw ValidationError(a.approach + ": unknown criterion '" + k + "'");
      }
      if (!(v >= 0 && v <= 1)) {
        throw ValidationError(a.approach + ": value for '" + k + "' must lie in [0, 1], got " +
                              Value::render_real(v));
      }
    }
    for (const auto& c : criteria) {
      if (!a.values.count(c.name)) {
        throw ValidationError(a.approach + ": no value for criterion '" + c.name + "'");
      }
    }
  }
}

// Total = sum of value x weight. Ties are reported, never broken.
inline ScoreBoard score(const std::vector<Criterion>& criteria,
                        const std::vector<Assessment>& assessments) {
  check_inputs(criteria, assessments);
  ScoreBoard b;
  b.max_total = weight_sum(criteria);
  b.tolerance = tie_tolerance(criteria);
  for (const auto& a : assessments) {
    double total = 0;
    for (const auto& c : criteria) total += a.values.at(c.name) * c.weight;
    b.entries.push_back({a.approach, total, 0});
  }
  for (auto& e : b.entries) {
    std::size_t better = 0;
    for (const auto& o : b.entries) better += o.total - e.total > b.tolerance;
    e.rank = better + 1;
  }
  std::sort(b.entries.begin(), b.entries.end(), [](const ScoreEntry& x, const ScoreEntry& y) {
    return x.rank != y.rank ? x.rank < y.rank : x.approach < y.approach;
  });
  for (std::size_t i = 0; i < b.entries.size();) {
    std::size_t j = i;
    std::vector<std::string> group;
    while (j < b.entries.size() && b.entries[j].rank == b.entries[i].rank) {
      group.push_back(b.entries[j++].approach);
    }
    if (group.size() > 1) b.ties.push_back(group);
    i = j;
  }
  return b;
}

struct SensitivityRow {
  std::string criterion;
  double factor = 1;
  std::set<std::string> top_before;
  std::set<std::string> top_after;
  bool changed() const { return top_before != top_after; }
};

// Scales each weight by (1 - p) and (1 + p) in turn and reports whether the
// top-ranked group moves.
inline std::vector<SensitivityRow> sensitivity(const std::vector<Criterion>& criteria,
                                               const std::vector<Assessment>& assessments,
                                               double p) {
  if (!(p > 0 && p < 1)) {
    throw ValidationError("perturbation must lie strictly between 0 and 1");
  }
  const auto base = score(criteria, assessments).top();
  std::vector<SensitivityRow> rows;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    for (double f : {1 - p, 1 + p}) {
      auto scaled = criteria;
      scaled[i].weight *= f;
      rows.push_back({criteria[i].name, f, base, score(scaled, assessments).top()});
    }
  }
  return rows;
}

// Lower-case letters and digits only; a Greek rho counts as "rho".
inline std::string normalize_approach(std::string_view name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(name[i]);
    if (c == 0xCF && i + 1 < name.size() && static_cast<unsigned char>(name[i + 1]) == 0x81) {
      out += "rho";
      ++i;
    } else if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
    }
  }
  return out;
}

// Textual constraints on the published benchmark: the six named approaches
// score within [5.5, 10.25], DynDEVS beats Cell-DEVS, and EDEVS, Cell-DEVS
// and SysML tie. Returns the violated constraints; empty means accepted.
inline std::vector<std::string> paper_check(const std::vector<Criterion>& criteria,
                                            const std::vector<Assessment>& assessments) {
  std::vector<std::string> bad;
  const auto preset = paper_preset();
  bool same = criteria.size() == preset.size();
  for (std::size_t i = 0; same && i < preset.size(); ++i) {
    same = criteria[i].name == preset[i].name && criteria[i].weight == preset[i].weight;
  }
  if (!same) bad.push_back("criteria differ from the preset");

  ScoreBoard b = score(criteria, assessments);
  std::map<std::string, const ScoreEntry*> by_key;
  for (const auto& e : b.entries) by_key[normalize_approach(e.approach)] = &e;

  const std::vector<std::pair<std::string, std::string>> named{
      {"variabledevs", "Variable-DEVS"}, {"dyndevs", "DynDEVS"}, {"rhodevs", "rhoDEVS"},
      {"edevs", "EDEVS"},               {"celldevs", "Cell-DEVS"}, {"sysml", "SysML"}};
  auto total = [&](const std::string& key) -> std::optional<double> {
    auto it = by_key.find(key);
    if (it == by_key.end()) return std::nullopt;
    return it->second->total;
  };
  for (const auto& [key, label] : named) {
    auto t = total(key);
    if (!t) {
      bad.push_back("missing approach " + label);
      continue;
    }
    if (*t < 5.5 - b.tolerance || *t > 10.25 + b.tolerance) {
      bad.push_back(label + " scores " + Value::render_real(*t) + ", outside [5.5, 10.25]");
    }
  }
  auto dyn = total("dyndevs"), cell = total("celldevs");
  if (dyn && cell && !(*dyn - *cell > b.tolerance)) {
    bad.push_back("DynDEVS does not score above Cell-DEVS");
  }
  auto ed = total("edevs"), sys = total("sysml");
  if (ed && cell && sys &&
      (std::abs(*ed - *cell) > b.tolerance || std::abs(*sys - *cell) > b.tolerance)) {
    bad.push_back("EDEVS, Cell-DEVS and SysML do not share one score");
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Input files, in the model document dialect:
//
//   dsdevs 1
//   criteria { decision_authority = 3  ports_existence = 4 }
//
//   dsdevs 1
//   approach "DynDEVS" { decision_authority = 1  ports_existence = 0.5 }

inline std::vector<Criterion> parse_criteria(std::string_view text) {
  io::Cursor c(text);
  c.header();
  c.expect("criteria");
  c.expect("{");
  std::vector<Criterion> out;
  while (!c.accept("}")) {
    if (c.accept(";") || c.accept(",")) continue;
    const io::Token& name = c.ident("criterion name");
    c.expect("=");
    out.push_back({name.text, c.number("weight")});
  }
  if (!c.at_end()) c.fail("unexpected " + io::Cursor::describe(c.peek()));
  return out;
}

inline std::vector<Assessment> parse_assessments(std::string_view text) {
  io::Cursor c(text);
  c.header();
  std::vector<Assessment> out;
  while (!c.at_end()) {
    c.expect("approach");
    if (c.peek().kind != io::Tok::String) c.fail("expected quoted approach name");
    Assessment a{c.next().text, {}};
    c.expect("{");
    while (!c.accept("}")) {
      if (c.accept(";") || c.accept(",")) continue;
      const io::Token& name = c.ident("criterion name");
      if (a.values.count(name.text)) {
        throw ParseError(name.at, "duplicate value for '" + name.text + "'");
      }
      c.expect("=");
      a.values[name.text] = c.number("conformity value");
    }
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports.

inline std::string format_number(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << v;
  return ss.str();
}

// Aligned table for people.
inline std::string render_table(const ScoreBoard& b) {
  std::size_t width = 8;
  for (const auto& e : b.entries) width = std::max(width, e.approach.size());
  std::ostringstream out;
  out << std::left << std::setw(6) << "rank" << std::setw(static_cast<int>(width) + 2)
      << "approach" << "score\n";
  for (const auto& e : b.entries) {
    std::string rank = std::to_string(e.rank);
    bool tied = false;
    for (const auto& g : b.ties) tied = tied || std::find(g.begin(), g.end(), e.approach) != g.end();
    if (tied) rank += "=";
    out << std::left << std::setw(6) << rank << std::setw(static_cast<int>(width) + 2)
        << e.approach << format_number(e.total) << "\n";
  }
  out << "max " << format_number(b.max_total) << "\n";
  return out.str();
}

// One tab-separated line per fact, for scripts.
inline std::string render_lines(const ScoreBoard& b) {
  std::ostringstream out;
  for (const auto& e : b.entries) {
    out << "score\t" << e.approach << "\t" << Value::render_real(e.total) << "\t" << e.rank << "\n";
  }
  for (const auto& g : b.ties) {
    out << "tie";
    for (const auto& n : g) out << "\t" << n;
    out << "\n";
  }
  return out.str();
}

inline std::string render_sensitivity(const std::vector<SensitivityRow>& rows) {
  auto join = [](const std::set<std::string>& s) {
    std::string out;
    for (const auto& n : s) out += (out.empty() ? "" : ",") + n;
    return out;
  };
  std::ostringstream out;
  for (const auto& r : rows) {
    out << "sensitivity\t" << r.criterion << "\t" << Value::render_real(r.factor) << "\t"
        << (r.changed() ? "changed" : "stable") << "\t" << join(r.top_before) << "\t"
        << join(r.top_after) << "\n";
  }
  return out.str();
}

}  // namespace dsdevs::scoring
