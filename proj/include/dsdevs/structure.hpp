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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsdevs/error.hpp"
#include "dsdevs/spec.hpp"
#include "dsdevs/time.hpp"

namespace dsdevs {

// How a dynamically inserted atomic obtains its first state.
struct InitDirective {
  struct Default {};  // the behavior's own initial state
  struct Static {
    Value state;
  };
  struct Contextual {
    std::string initializer;
    Value params = Value::record({});
  };

  std::variant<Default, Static, Contextual> mode;

  static InitDirective fixed(Value state) { return {Static{std::move(state)}}; }
  static InitDirective contextual(std::string name, Value params = Value::record({})) {
    return {Contextual{std::move(name), std::move(params)}};
  }

  std::string str() const {
    if (std::holds_alternative<Default>(mode)) return "default";
    if (auto* s = std::get_if<Static>(&mode)) return "static:" + s->state.str();
    const auto& c = std::get<Contextual>(mode);
    return "contextual:" + c.initializer;
  }
};

namespace change {

struct AddModel {
  ModelPath parent;
  std::string name;
  ModelSpec spec;
  InitDirective init;
};
struct RemoveModel {
  ModelPath target;
};
struct AddCoupling {
  ModelPath scope;
  Coupling coupling;
};
struct RemoveCoupling {
  ModelPath scope;
  Coupling coupling;
};
struct AddPort {
  ModelPath target;
  PortSpec port;
};
struct RemovePort {
  ModelPath target;
  std::string name;
  Direction direction = Direction::In;
};
struct RetypePort {
  ModelPath target;
  std::string name;
  Direction direction = Direction::In;
  ValueType type;
};
struct ReplaceModel {
  ModelPath target;
  ModelSpec spec;
  InitDirective init;
};

}  // namespace change

using StructureChange =
    std::variant<change::AddModel, change::RemoveModel, change::AddCoupling,
                 change::RemoveCoupling, change::AddPort, change::RemovePort, change::RetypePort,
                 change::ReplaceModel>;

inline std::string_view change_name(const StructureChange& c) {
  static constexpr std::string_view names[] = {"add_model",    "remove_model", "add_coupling",
                                               "remove_coupling", "add_port",  "remove_port",
                                               "retype_port",  "replace_model"};
  return names[c.index()];
}

struct StructureChangeRequest {
  ModelPath requester;
  std::uint64_t seq = 0;
  StructureChange change;
};

enum class StructureReason {
  UnknownPath,
  DuplicateName,
  DanglingCoupling,
  PortInUse,
  TypeMismatch,
  AuthorityDenied,
  InvalidSpec,
};

inline std::string_view to_string(StructureReason r) {
  switch (r) {
    case StructureReason::UnknownPath: return "UnknownPath";
    case StructureReason::DuplicateName: return "DuplicateName";
    case StructureReason::DanglingCoupling: return "DanglingCoupling";
    case StructureReason::PortInUse: return "PortInUse";
    case StructureReason::TypeMismatch: return "TypeMismatch";
    case StructureReason::AuthorityDenied: return "AuthorityDenied";
    case StructureReason::InvalidSpec: return "InvalidSpec";
  }
  return "?";
}

struct StructureIssue {
  StructureReason reason;
  std::string detail;

  std::string str() const { return std::string(to_string(reason)) + ": " + detail; }
};

class StructureError : public Error {
 public:
  StructureError(StructureIssue issue, std::optional<StructureChangeRequest> request = {})
      : Error(ErrorCode::Structure, issue.str()),
        issue_(std::move(issue)),
        request_(std::move(request)) {}

  StructureReason reason() const noexcept { return issue_.reason; }
  const StructureIssue& issue() const noexcept { return issue_; }
  const std::optional<StructureChangeRequest>& request() const noexcept { return request_; }

 private:
  StructureIssue issue_;
  std::optional<StructureChangeRequest> request_;
};

enum class Authority { Distributed, ExecutiveOnly };
enum class ConflictMode { Strict, Lenient };

struct ChangePolicy {
  Authority authority = Authority::Distributed;
  ModelPath executive;  // meaningful only for ExecutiveOnly
  ConflictMode conflict = ConflictMode::Strict;

  friend bool operator==(const ChangePolicy&, const ChangePolicy&) = default;
};

// Read-only view of one coupled model's children at insertion time.
struct ContextSnapshot {
  struct Sibling {
    std::string name;
    SimTime t_next;
    Value observables = Value::record({});
  };

  SimTime time;
  ModelPath parent;
  std::vector<Sibling> siblings;  // sorted by name

  const Sibling* find(std::string_view name) const {
    for (const auto& s : siblings) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }
};

}  // namespace dsdevs
