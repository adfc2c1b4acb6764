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

#pragma once

// Post-auction checks and analytics.
//
// verify_feasibility checks an outcome against the six settlement
// constraints:
//   1. every allocation is zero or exactly one of the user's bundles
//   2. net demand is nonpositive in every pool
//   3. winners can afford their bundle:      willingness >= x.p
//   4. winners hold a cheapest bundle:       x.p == min_q q.p
//   5. losers are priced out:                willingness <  min_q q.p
//   6. prices are nonnegative
// Real comparisons allow a relative slack of `tolerance`; a constraint is
// reported only when it is violated by more than that.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clockex/market.hpp"

namespace clockex {

inline constexpr double kFeasibilityTolerance = 1e-9;

struct Violation {
  int constraint = 0;   // 1..6
  std::string subject;  // user id or pool id
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct FeasibilityReport {
  bool passed = true;
  std::vector<Violation> violations;
};

// Collects every violation. Throws kMismatch if the outcome names a user
// without a bid.
FeasibilityReport verify_feasibility(std::span<const Bid> bids, const AuctionOutcome& outcome,
                                     double tolerance = kFeasibilityTolerance);

// |willingness - x.p| / |x.p|. Throws kInvalidInput for a zero allocation and
// kDivisionByZero when the settled value is zero.
double bid_premium(const Bid& bid, const BundleVector& allocation, const PriceVector& prices);

enum class TradeSide { kBid, kOffer };

std::string_view to_string(TradeSide side);

struct UtilizationRecord {
  UserId user;
  PoolId pool;
  TradeSide side = TradeSide::kBid;
  double utilization = 0.0;

  friend bool operator==(const UtilizationRecord&, const UtilizationRecord&) = default;
};

struct SettlementStats {
  std::map<UserId, double> premiums;  // winners with a defined premium
  std::vector<UserId> undefined_premiums;
  std::optional<double> median_premium;
  std::optional<double> mean_premium;
  double percent_settled = 0.0;
  std::vector<UtilizationRecord> utilization_records;
  std::map<PoolId, double> price_ratios;  // final / baseline
};

// Throws kInfeasibleOutcome unless the outcome converged and passes
// verify_feasibility. Pools without a positive baseline get no ratio.
SettlementStats settlement_stats(std::span<const Bid> bids, const AuctionOutcome& outcome,
                                 const Market& market, const PriceVector& baseline_prices);

}  // namespace clockex
