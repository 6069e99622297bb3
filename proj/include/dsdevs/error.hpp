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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dsdevs {

// Every failure raised by the library is an Error carrying one of these codes.
// The CLI maps the code family onto its exit status.
enum class ErrorCode {
  Usage,
  TypeMismatch,
  Parameter,
  ModelContractViolation,
  ProtocolViolation,
  RoutingError,
  LivelockSuspected,
  ClassicSemanticsViolation,
  Structure,
  Parse,
  Validation,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "usage_error";
    case ErrorCode::TypeMismatch: return "type_mismatch";
    case ErrorCode::Parameter: return "parameter_error";
    case ErrorCode::ModelContractViolation: return "model_contract_violation";
    case ErrorCode::ProtocolViolation: return "protocol_violation";
    case ErrorCode::RoutingError: return "routing_error";
    case ErrorCode::LivelockSuspected: return "livelock_suspected";
    case ErrorCode::ClassicSemanticsViolation: return "classic_semantics_violation";
    case ErrorCode::Structure: return "structure_error";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Validation: return "validation_error";
  }
  return "unknown_error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCode::Usage, what) {}
};

class TypeMismatchError : public Error {
 public:
  explicit TypeMismatchError(const std::string& what)
      : Error(ErrorCode::TypeMismatch, what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(ErrorCode::Parameter, what) {}
};

class ModelContractViolation : public Error {
 public:
  explicit ModelContractViolation(const std::string& what)
      : Error(ErrorCode::ModelContractViolation, what) {}
};

class ProtocolViolation : public Error {
 public:
  explicit ProtocolViolation(const std::string& what)
      : Error(ErrorCode::ProtocolViolation, what) {}
};

class RoutingError : public Error {
 public:
  explicit RoutingError(const std::string& what)
      : Error(ErrorCode::RoutingError, what) {}
};

class LivelockSuspected : public Error {
 public:
  explicit LivelockSuspected(const std::string& what)
      : Error(ErrorCode::LivelockSuspected, what) {}
};

class ClassicSemanticsViolation : public Error {
 public:
  explicit ClassicSemanticsViolation(const std::string& what)
      : Error(ErrorCode::ClassicSemanticsViolation, what) {}
};

struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

class ParseError : public Error {
 public:
  ParseError(SourceLocation where, const std::string& what)
      : Error(ErrorCode::Parse, where.str() + ": " + what), where_(where) {}

  SourceLocation where() const noexcept { return where_; }

 private:
  SourceLocation where_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::Validation, what) {}
};

}  // namespace dsdevs
