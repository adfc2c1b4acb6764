// Copyright 2026 The clockex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clockex/errors.hpp"

namespace clockex {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidBid: return "invalid-bid";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kInvalidRange: return "invalid-range";
    case ErrorCode::kUnknownPool: return "unknown-pool";
    case ErrorCode::kDuplicatePool: return "duplicate-pool";
    case ErrorCode::kDomain: return "domain-error";
    case ErrorCode::kDivisionByZero: return "division-by-zero";
    case ErrorCode::kMismatch: return "mismatch";
    case ErrorCode::kInfeasibleOutcome: return "infeasible-outcome";
    case ErrorCode::kWindowClosed: return "window-closed";
    case ErrorCode::kBudgetExceeded: return "budget-exceeded";
    case ErrorCode::kUnknownService: return "unknown-service";
    case ErrorCode::kWrongState: return "wrong-state";
    case ErrorCode::kSettlementInfeasible: return "settlement-infeasible";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kUnauthorized: return "unauthorized";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace clockex
