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

// JSON encodings shared by the HTTP API, the ledger and the batch tool.
// Decoders throw Error(kParse) naming the offending field.

#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clockex/exchange.hpp"
#include "clockex/market.hpp"
#include "clockex/settlement.hpp"

namespace clockex {

using nlohmann::json;

json encode(const ResourcePool& pool);
json encode(const BundleVector& bundle);
json encode(const Bid& bid);
json encode(const PriceVector& prices);
json encode(const ReserveCurve& curve);
json encode(const MarketConfig& config);
json encode(const AuctionOutcome& outcome);
json encode(const FeasibilityReport& report);
json encode(const SettlementStats& stats);
json encode(const MarketSummary& summary);
json encode(const RequirementTranslation& table);
json encode(const BidAck& ack);

ResourcePool decode_pool(const json& j);
BundleVector decode_bundle(const json& j);
// Also raises the Bid constructor's kInvalidBid / kBudgetExceeded.
Bid decode_bid(const json& j);
PriceVector decode_prices(const json& j);
// Missing fields keep their defaults.
MarketConfig decode_config(const json& j);
RequirementTranslation decode_translation(const json& j);
MarketDefinition decode_market_definition(const json& j);

// Canonical text of an outcome record; byte-identical for equal outcomes.
std::string canonical(const AuctionOutcome& outcome);

// One bid per line; blank lines are skipped. Errors carry the line number.
std::vector<Bid> read_bids(std::istream& in);
void write_bids(std::ostream& out, const std::vector<Bid>& bids);

// Throws kIo / kParse.
MarketDefinition load_market_definition(const std::string& path);

}  // namespace clockex
