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

// Simulated ascending clock auction.
//
// Each round every bidder proxy responds to the current prices, the responses
// are summed into an excess-demand vector z, and the auction stops as soon as
// z <= 0 in every pool. Otherwise each pool with positive excess demand is
// raised by min(alpha_r * z_r, cap_r):
//
//   fractional-cap:  cap_r = delta * p_r   (delta * cost_r while p_r == 0)
//   absolute-cap:    cap_r = delta
//
// With normalize_increments, alpha_r = alpha * reserve_r / max_s reserve_s so
// cheap pools move more slowly. Prices never decrease.

#include <map>
#include <span>

#include "clockex/market.hpp"
#include "clockex/proxy.hpp"

namespace clockex {

// Excess demand in a pool counts as positive only above this fraction of the
// gross volume traded there (and at least this absolute amount).
inline constexpr double kDemandTolerance = 1e-9;

struct RoundState {
  int round = 0;
  PriceVector prices;
  std::map<UserId, ProxyResponse> responses;
  BundleVector excess_demand;
};

// Runs every proxy at `prices`. Throws kUnknownPool like evaluate_proxy.
RoundState evaluate_round(std::span<const Bid> bids, const PriceVector& prices,
                          int round = 0);

// Per-pool increment for the next round. `market` supplies the pool costs
// used for the zero-price floor and the reserves used for normalization.
std::map<PoolId, double> price_increment(const RoundState& state,
                                         const MarketConfig& config,
                                         const Market& market);

// Runs the clock from `start_prices` until excess demand is nonpositive, or a
// guard trips: at most config.max_rounds rounds are evaluated, and no price may
// pass config.price_ceiling. Guard outcomes carry no allocations. Throws
// kInvalidInput when a bid references a pool without a start price, a start
// price names a pool outside `market`, or a user bids twice.
AuctionOutcome run_auction(const Market& market, std::span<const Bid> bids,
                           const PriceVector& start_prices, const MarketConfig& config);

}  // namespace clockex
