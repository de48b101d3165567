// Copyright 2026 The rolegraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rolegraph {

enum class ErrorKind {
  kUnknownId,
  kInvalidModel,
  kFlagViolation,
  kNotUnique,
  kBudgetExceeded,
  kUnknownAlgorithm,
  kIdCollision,
  kNotAnArc,
  kMixedLattice,
  kEmptyPermissions,
  kSyntax,
  kSchema,
  kVerificationFailed,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnknownId: return "unknown-id";
    case ErrorKind::kInvalidModel: return "invalid-model";
    case ErrorKind::kFlagViolation: return "flag-violation";
    case ErrorKind::kNotUnique: return "not-unique";
    case ErrorKind::kBudgetExceeded: return "budget-exceeded";
    case ErrorKind::kUnknownAlgorithm: return "unknown-algorithm";
    case ErrorKind::kIdCollision: return "id-collision";
    case ErrorKind::kNotAnArc: return "not-an-arc";
    case ErrorKind::kMixedLattice: return "mixed-lattice";
    case ErrorKind::kEmptyPermissions: return "empty-permissions";
    case ErrorKind::kSyntax: return "syntax";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kVerificationFailed: return "verification-failed";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rolegraph
