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

#include "clockex/settlement.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "clockex/clock.hpp"
#include "clockex/errors.hpp"
#include "clockex/reserve.hpp"
#include "test_support.hpp"

namespace clockex {
namespace {

using testing::pool;
using testing::user;

AuctionOutcome three_party_outcome() {
  const Market market(testing::three_party_pools());
  return run_auction(market, testing::three_party_bids(), reserve_vector(market.pools(), ReserveCurve{}),
                     testing::three_party_config());
}

bool has_constraint(const FeasibilityReport& r, int constraint, const std::string& subject) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) {
    return v.constraint == constraint && v.subject == subject;
  });
}

TEST(Feasibility, ThreePartyOutcomePasses) {
  const auto report = verify_feasibility(testing::three_party_bids(), three_party_outcome());
  EXPECT_TRUE(report.passed);
  EXPECT_TRUE(report.violations.empty());
}

TEST(Feasibility, LoserWhoCouldAffordIsFlagged) {
  auto bids = testing::three_party_bids();
  bids[1] = testing::unit_bid("B", "pool1", 1, 7);
  const auto report = verify_feasibility(bids, three_party_outcome());
  EXPECT_FALSE(report.passed);
  EXPECT_TRUE(has_constraint(report, 5, "B"));
}

TEST(Feasibility, UnmatchedDemandIsFlagged) {
  auto outcome = three_party_outcome();
  outcome.allocations[user("S")] = BundleVector{};
  outcome.winners.erase(user("S"));
  outcome.losers.insert(user("S"));
  const auto report = verify_feasibility(testing::three_party_bids(), outcome);
  EXPECT_TRUE(has_constraint(report, 2, "pool1"));
}

TEST(Feasibility, WinnerPayingMoreThanWillingness) {
  auto outcome = three_party_outcome();
  outcome.final_prices.set(pool("pool1"), 11.0);
  const auto report = verify_feasibility(testing::three_party_bids(), outcome);
  EXPECT_TRUE(has_constraint(report, 3, "A"));
}

TEST(Feasibility, AllocationOutsideBidIsFlagged) {
  auto outcome = three_party_outcome();
  outcome.allocations[user("A")] = BundleVector{{pool("pool1"), 2}};
  const auto report = verify_feasibility(testing::three_party_bids(), outcome);
  EXPECT_TRUE(has_constraint(report, 1, "A"));
}

TEST(Feasibility, WinnerNotOnCheapestBundle) {
  const std::vector<Bid> bids = {
      Bid(user("u"), {BundleVector{{pool("a"), 1}}, BundleVector{{pool("b"), 1}}}, 10)};
  AuctionOutcome outcome;
  outcome.final_prices = PriceVector{{pool("a"), 5}, {pool("b"), 2}};
  outcome.allocations[user("u")] = BundleVector{{pool("a"), 1}};
  outcome.winners.insert(user("u"));
  const auto report = verify_feasibility(bids, outcome);
  EXPECT_TRUE(has_constraint(report, 4, "u"));
  EXPECT_FALSE(has_constraint(report, 3, "u"));
}

TEST(Feasibility, ZeroPriceIsAllowed) {
  AuctionOutcome outcome;
  outcome.final_prices = PriceVector{{pool("a"), 1}};
  outcome.final_prices.set(pool("a"), 0.0);
  const std::vector<Bid> none;
  EXPECT_TRUE(verify_feasibility(none, outcome).passed);
}

TEST(Feasibility, ToleranceIsRelative) {
  auto outcome = three_party_outcome();
  const double p = outcome.final_prices.at(pool("pool1"));
  auto bids = testing::three_party_bids();
  // A loser whose willingness exceeds the price by less than the slack is
  // still consistent.
  bids[1] = testing::unit_bid("B", "pool1", 1, p * (1 + 1e-12));
  EXPECT_TRUE(verify_feasibility(bids, outcome).passed);
  bids[1] = testing::unit_bid("B", "pool1", 1, p * (1 + 1e-6));
  EXPECT_FALSE(verify_feasibility(bids, outcome).passed);
}

TEST(Feasibility, UnknownUserIsMismatch) {
  auto outcome = three_party_outcome();
  outcome.allocations[user("ghost")] = BundleVector{};
  try {
    verify_feasibility(testing::three_party_bids(), outcome);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMismatch);
  }
}

TEST(Premium, Examples) {
  const PriceVector prices{{pool("pool1"), 4}};
  const Bid buyer = testing::unit_bid("b", "pool1", 1, 5);
  EXPECT_DOUBLE_EQ(bid_premium(buyer, BundleVector{{pool("pool1"), 1}}, prices), 0.25);
  const Bid seller = testing::unit_bid("s", "pool1", -1, -3);
  EXPECT_DOUBLE_EQ(bid_premium(seller, BundleVector{{pool("pool1"), -1}}, prices), 0.25);
}

TEST(Premium, ScaleInvariant) {
  const Bid buyer = Bid(user("b"), {BundleVector{{pool("x"), 2}, {pool("y"), 1}}}, 9);
  const BundleVector alloc{{pool("x"), 2}, {pool("y"), 1}};
  const PriceVector p{{pool("x"), 1.5}, {pool("y"), 2}};
  const double base = bid_premium(buyer, alloc, p);
  for (double c : {0.01, 3.0, 1000.0}) {
    const Bid scaled(user("b"), {alloc.scaled(c)}, 9 * c);
    EXPECT_TRUE(testing::near(bid_premium(scaled, alloc.scaled(c), p), base, 1e-12));
    const PriceVector q{{pool("x"), 1.5 * c}, {pool("y"), 2 * c}};
    const Bid priced(user("b"), {alloc}, 9 * c);
    EXPECT_TRUE(testing::near(bid_premium(priced, alloc, q), base, 1e-12));
  }
}

TEST(Premium, UndefinedCases) {
  const PriceVector prices{{pool("pool1"), 0}};
  const Bid buyer = testing::unit_bid("b", "pool1", 1, 5);
  EXPECT_THROW(bid_premium(buyer, BundleVector{}, prices), Error);
  try {
    bid_premium(buyer, BundleVector{{pool("pool1"), 1}}, prices);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivisionByZero);
  }
}

TEST(Stats, ThreePartyValues) {
  const Market market(testing::three_party_pools());
  const auto outcome = three_party_outcome();
  const auto stats = settlement_stats(testing::three_party_bids(), outcome, market,
                                      PriceVector{{pool("pool1"), 4}});
  ASSERT_EQ(stats.premiums.size(), 2u);
  EXPECT_TRUE(testing::near(stats.premiums.at(user("A")), testing::kThreePartyPremiumA, 1e-12));
  EXPECT_TRUE(testing::near(stats.premiums.at(user("S")), testing::kThreePartyPremiumS, 1e-12));
  ASSERT_TRUE(stats.median_premium.has_value());
  EXPECT_TRUE(testing::near(*stats.median_premium, testing::kThreePartyMedianPremium, 1e-12));
  EXPECT_NEAR(stats.percent_settled, 200.0 / 3.0, 1e-9);
  EXPECT_TRUE(testing::near(stats.price_ratios.at(pool("pool1")), testing::kThreePartyRatioVsBaseline4,
                            1e-12));
  ASSERT_EQ(stats.utilization_records.size(), 2u);
  EXPECT_EQ(stats.utilization_records[0].user, user("A"));
  EXPECT_EQ(stats.utilization_records[0].side, TradeSide::kBid);
  EXPECT_DOUBLE_EQ(stats.utilization_records[0].utilization, 0.9);
  EXPECT_EQ(stats.utilization_records[1].side, TradeSide::kOffer);
}

TEST(Stats, NoBaselineMeansNoRatio) {
  const Market market(testing::three_party_pools());
  const auto stats = settlement_stats(testing::three_party_bids(), three_party_outcome(), market, PriceVector{});
  EXPECT_TRUE(stats.price_ratios.empty());
}

TEST(Stats, RefusesInfeasibleOrUnconverged) {
  const Market market(testing::three_party_pools());
  auto outcome = three_party_outcome();
  outcome.final_prices.set(pool("pool1"), 11.0);
  try {
    settlement_stats(testing::three_party_bids(), outcome, market, PriceVector{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleOutcome);
  }
  auto stalled = three_party_outcome();
  stalled.status = AuctionStatus::kRoundLimit;
  EXPECT_THROW(settlement_stats(testing::three_party_bids(), stalled, market, PriceVector{}), Error);
}

TEST(Stats, NoWinnersHasNoMedian) {
  const Market market(testing::three_party_pools());
  const std::vector<Bid> bids = {testing::unit_bid("b", "pool1", 1, 1)};
  const auto outcome =
      run_auction(market, bids, reserve_vector(market.pools(), ReserveCurve{}), testing::three_party_config());
  const auto stats = settlement_stats(bids, outcome, market, PriceVector{});
  EXPECT_FALSE(stats.median_premium.has_value());
  EXPECT_DOUBLE_EQ(stats.percent_settled, 0.0);
}

}  // namespace
}  // namespace clockex
