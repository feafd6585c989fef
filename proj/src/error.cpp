// Copyright 2026 The Menuforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "menuforge/error.hpp"

namespace menuforge {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidMarginal: return "InvalidMarginal";
    case ErrorCode::kInvalidK: return "InvalidK";
    case ErrorCode::kModeClassMismatch: return "ModeClassMismatch";
    case ErrorCode::kSupportTooLarge: return "SupportTooLarge";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kMenuTooLarge: return "MenuTooLarge";
    case ErrorCode::kUnsupportedClass: return "UnsupportedClass";
    case ErrorCode::kBoundednessViolated: return "BoundednessViolated";
    case ErrorCode::kNonMonotoneCoupling: return "NonMonotoneCoupling";
    case ErrorCode::kAsymmetricInstance: return "AsymmetricInstance";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kDegenerateInstance: return "DegenerateInstance";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kSeparationFailed: return "SeparationFailed";
    case ErrorCode::kNegativeMass: return "NegativeMass";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_budget_error(ErrorCode code) {
  return code == ErrorCode::kSupportTooLarge || code == ErrorCode::kBudgetExceeded ||
         code == ErrorCode::kMenuTooLarge;
}

}  // namespace menuforge
