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

#include "clockex/clock.hpp"

#include <gtest/gtest.h>

#include <random>

#include "clockex/errors.hpp"
#include "clockex/population.hpp"
#include "clockex/reserve.hpp"
#include "clockex/settlement.hpp"
#include "test_support.hpp"

namespace clockex {
namespace {

using testing::make_pool;
using testing::pool;
using testing::user;

RoundState state_with(PriceVector prices, BundleVector z) {
  RoundState s;
  s.prices = std::move(prices);
  s.excess_demand = std::move(z);
  return s;
}

MarketConfig cfg(double alpha, double delta, IncrementMode mode) {
  MarketConfig c;
  c.alpha = alpha;
  c.delta = delta;
  c.increment_mode = mode;
  return c;
}

TEST(PriceIncrement, FractionalCapBinds) {
  const Market market({make_pool("A", 1, 0.5), make_pool("B", 1, 0.5)});
  const auto g = price_increment(
      state_with(PriceVector{{pool("A"), 4}, {pool("B"), 10}},
                 BundleVector{{pool("A"), 2}, {pool("B"), -1}}),
      cfg(1, 0.25, IncrementMode::kFractionalCap), market);
  EXPECT_DOUBLE_EQ(g.at(pool("A")), 1.0);
  EXPECT_DOUBLE_EQ(g.at(pool("B")), 0.0);
}

TEST(PriceIncrement, SmallDemandBelowCap) {
  const Market market({make_pool("A", 1, 0.5)});
  const auto g = price_increment(state_with(PriceVector{{pool("A"), 4}}, BundleVector{{pool("A"), 0.1}}),
                                 cfg(1, 0.25, IncrementMode::kFractionalCap), market);
  EXPECT_DOUBLE_EQ(g.at(pool("A")), 0.1);
}

TEST(PriceIncrement, AbsoluteCap) {
  const Market market({make_pool("A", 1, 0.5)});
  const auto g = price_increment(state_with(PriceVector{{pool("A"), 4}}, BundleVector{{pool("A"), 2}}),
                                 cfg(1, 0.25, IncrementMode::kAbsoluteCap), market);
  EXPECT_DOUBLE_EQ(g.at(pool("A")), 0.25);
}

TEST(PriceIncrement, ZeroPriceUsesCostFloor) {
  const Market market({make_pool("A", 8, 0.5)});
  const auto g = price_increment(state_with(PriceVector{{pool("A"), 0}}, BundleVector{{pool("A"), 5}}),
                                 cfg(1, 0.25, IncrementMode::kFractionalCap), market);
  EXPECT_DOUBLE_EQ(g.at(pool("A")), 2.0);
}

TEST(PriceIncrement, NormalizationSlowsCheapPools) {
  // Both pools at break-even, so reserves equal costs: 10 and 1.
  const Market market({make_pool("cpu", 10, 0.6), make_pool("disk", 1, 0.6)});
  MarketConfig c = cfg(1, 0.5, IncrementMode::kFractionalCap);
  c.normalize_increments = true;
  const auto g = price_increment(
      state_with(PriceVector{{pool("cpu"), 10}, {pool("disk"), 10}},
                 BundleVector{{pool("cpu"), 2}, {pool("disk"), 2}}),
      c, market);
  EXPECT_DOUBLE_EQ(g.at(pool("cpu")), 2.0);
  EXPECT_DOUBLE_EQ(g.at(pool("disk")), 0.2);
}

TEST(EvaluateRound, ExcessDemandIsAggregateOfResponses) {
  const auto bids = testing::three_party_bids();
  const RoundState s = evaluate_round(bids, PriceVector{{pool("pool1"), 3}});
  std::vector<BundleVector> demands;
  for (const auto& [u, r] : s.responses) demands.push_back(r.demand);
  EXPECT_EQ(s.excess_demand, aggregate_demand(demands));
  EXPECT_EQ(s.excess_demand[pool("pool1")], 1);
}

TEST(RunAuction, NoBidsConvergesAtRoundZero) {
  const Market market(testing::three_party_pools());
  const PriceVector start{{pool("pool1"), 2.5}};
  const auto out = run_auction(market, {}, start, testing::three_party_config());
  EXPECT_EQ(out.status, AuctionStatus::kConverged);
  EXPECT_EQ(out.rounds, 0);
  EXPECT_EQ(out.final_prices, start);
  EXPECT_TRUE(out.winners.empty());
}

TEST(RunAuction, BuyerBelowReserveLosesImmediately) {
  const Market market(testing::three_party_pools());
  const std::vector<Bid> bids = {testing::unit_bid("b", "pool1", 1, 5)};
  const auto out = run_auction(market, bids, PriceVector{{pool("pool1"), 8}}, testing::three_party_config());
  EXPECT_EQ(out.status, AuctionStatus::kConverged);
  EXPECT_EQ(out.rounds, 0);
  EXPECT_TRUE(out.losers.contains(user("b")));
  EXPECT_TRUE(out.allocation(user("b")).is_zero());
}

TEST(RunAuction, ThreePartyGolden) {
  const Market market(testing::three_party_pools());
  const auto bids = testing::three_party_bids();
  const PriceVector start = reserve_vector(market.pools(), ReserveCurve{});
  const auto out = run_auction(market, bids, start, testing::three_party_config());
  ASSERT_EQ(out.status, AuctionStatus::kConverged);
  ASSERT_EQ(out.trajectory.size(), std::size(testing::kThreePartyTrajectory));
  for (std::size_t t = 0; t < out.trajectory.size(); ++t) {
    EXPECT_TRUE(testing::near(out.trajectory[t].prices[0], testing::kThreePartyTrajectory[t], 1e-12))
        << "round " << t << ": " << out.trajectory[t].prices[0];
  }
  EXPECT_GT(out.final_prices.at(pool("pool1")), 6.0);
  EXPECT_EQ(out.winners, (std::set<UserId>{user("A"), user("S")}));
  EXPECT_EQ(out.losers, (std::set<UserId>{user("B")}));
  EXPECT_EQ(out.allocation(user("A")), (BundleVector{{pool("pool1"), 1}}));
  EXPECT_EQ(out.allocation(user("S")), (BundleVector{{pool("pool1"), -1}}));
}

TEST(RunAuction, InvalidInputs) {
  const Market market(testing::three_party_pools());
  const std::vector<Bid> unknown = {testing::unit_bid("b", "nope", 1, 5)};
  EXPECT_THROW(run_auction(market, unknown, PriceVector{{pool("pool1"), 1}}, testing::three_party_config()),
               Error);
  const std::vector<Bid> twice = {testing::unit_bid("b", "pool1", 1, 5),
                                  testing::unit_bid("b", "pool1", 1, 6)};
  EXPECT_THROW(run_auction(market, twice, PriceVector{{pool("pool1"), 1}}, testing::three_party_config()),
               Error);
  EXPECT_THROW(run_auction(market, {}, PriceVector{{pool("other"), 1}}, testing::three_party_config()),
               Error);
}

TEST(RunAuction, TraderLeapfrogHitsRoundLimit) {
  const Market market({make_pool("a", 1, 0.5), make_pool("b", 1, 0.7)});
  const std::vector<Bid> bids = {
      Bid(user("T1"), {BundleVector{{pool("a"), 1}, {pool("b"), -1}}}, 0),
      Bid(user("T2"), {BundleVector{{pool("b"), 1}, {pool("a"), -1}}}, 0)};
  MarketConfig c;
  c.max_rounds = 300;
  const auto out = run_auction(market, bids, reserve_vector(market.pools(), c.reserve_curve), c);
  EXPECT_EQ(out.status, AuctionStatus::kRoundLimit);
  EXPECT_EQ(out.rounds, 299);
  EXPECT_EQ(out.trajectory.size(), 300u);
  EXPECT_TRUE(out.allocations.empty());
  EXPECT_TRUE(out.winners.empty());
  EXPECT_EQ(out.losers.size(), 2u);
}

TEST(RunAuction, PriceCeilingGuard) {
  const Market market(testing::three_party_pools());
  MarketConfig c = testing::three_party_config();
  c.price_ceiling = PriceVector{{pool("pool1"), 5.0}};
  const auto out = run_auction(market, testing::three_party_bids(), PriceVector{{pool("pool1"), 2.8}}, c);
  EXPECT_EQ(out.status, AuctionStatus::kPriceCeiling);
  EXPECT_TRUE(out.allocations.empty());
  EXPECT_LE(out.trajectory.back().prices[0], 5.0);
}

TEST(RunAuction, MaxRoundsOneEvaluatesOnlyStart) {
  const Market market(testing::three_party_pools());
  MarketConfig c = testing::three_party_config();
  c.max_rounds = 1;
  const auto out = run_auction(market, testing::three_party_bids(), PriceVector{{pool("pool1"), 2.8}}, c);
  EXPECT_EQ(out.status, AuctionStatus::kRoundLimit);
  EXPECT_EQ(out.trajectory.size(), 1u);
}

TEST(RunAuction, ZeroStartPriceLeavesZero) {
  const Market market({make_pool("p", 2, 0.5)});
  const std::vector<Bid> bids = {testing::unit_bid("b1", "p", 1, 3), testing::unit_bid("b2", "p", 1, 1)};
  MarketConfig c;
  c.delta = 0.5;
  const std::vector<Bid> with_seller = {bids[0], bids[1], testing::unit_bid("s", "p", -1, 0)};
  const auto out = run_auction(market, with_seller, PriceVector{{pool("p"), 0}}, c);
  ASSERT_EQ(out.status, AuctionStatus::kConverged);
  EXPECT_GT(out.trajectory[1].prices[0], 0.0);
  EXPECT_EQ(out.winners, (std::set<UserId>{user("b1"), user("s")}));
}

struct RandomMarket {
  Market market;
  std::vector<Bid> bids;
  PriceVector start;
  MarketConfig config;
};

RandomMarket random_pure_market(std::uint64_t seed) {
  SeededRng rng(seed);
  RandomMarket m;
  m.market = Market(generate_pools(seed, rng.integer(1, 6)));
  PopulationCounts counts{rng.integer(0, 20), rng.integer(0, 10), 0};
  m.bids = generate_population(seed * 7 + 1, m.market, counts);
  m.config.delta = rng.uniform(0.05, 0.3);
  m.start = reserve_vector(m.market.pools(), m.config.reserve_curve);
  return m;
}

TEST(RunAuctionProperties, MonotoneCappedAndFeasible) {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const RandomMarket m = random_pure_market(seed);
    const auto out = run_auction(m.market, m.bids, m.start, m.config);
    ASSERT_EQ(out.status, AuctionStatus::kConverged) << "seed " << seed;
    for (std::size_t t = 1; t < out.trajectory.size(); ++t) {
      const auto& prev = out.trajectory[t - 1];
      const auto& next = out.trajectory[t];
      for (std::size_t r = 0; r < prev.prices.size(); ++r) {
        EXPECT_GE(next.prices[r], prev.prices[r]);
        if (next.prices[r] > prev.prices[r]) EXPECT_GT(prev.excess_demand[r], 0.0);
        if (prev.prices[r] > 0) {
          EXPECT_LE(next.prices[r], (1 + m.config.delta) * prev.prices[r] * (1 + 1e-12));
        }
      }
    }
    const auto report = verify_feasibility(m.bids, out);
    EXPECT_TRUE(report.passed) << "seed " << seed << ": " << report.violations.front().detail;
  }
}

TEST(RunAuctionProperties, Deterministic) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RandomMarket m = random_pure_market(seed);
    const auto a = run_auction(m.market, m.bids, m.start, m.config);
    const auto b = run_auction(m.market, m.bids, m.start, m.config);
    EXPECT_EQ(a.trajectory, b.trajectory);
    EXPECT_EQ(a.allocations, b.allocations);
    EXPECT_EQ(a.final_prices, b.final_prices);
  }
}

TEST(RunAuctionProperties, RespondsLikeStandaloneProxies) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const RandomMarket m = random_pure_market(seed);
    const auto out = run_auction(m.market, m.bids, m.start, m.config);
    const RoundState last = evaluate_round(m.bids, out.final_prices);
    for (const auto& bid : m.bids) {
      EXPECT_EQ(last.responses.at(bid.user()).demand, out.allocation(bid.user()));
    }
  }
}

TEST(RunAuctionProperties, PureBuyersEndWithinPriceCeilingBound) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const double start = std::uniform_real_distribution<double>(0.5, 5)(rng);
    const double delta = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
    const int n = std::uniform_int_distribution<int>(1, 30)(rng);
    const Market market({make_pool("p", 1, 0.5)});
    std::vector<Bid> bids;
    double top = start;
    for (int i = 0; i < n; ++i) {
      const double v = std::uniform_real_distribution<double>(0.1, 200)(rng);
      top = std::max(top, v);
      bids.push_back(testing::unit_bid("b" + std::to_string(i), "p", 1, v));
    }
    MarketConfig c;
    c.delta = delta;
    c.alpha = 1e6;  // the fractional cap always binds
    const auto out = run_auction(market, bids, PriceVector{{pool("p"), start}}, c);
    ASSERT_EQ(out.status, AuctionStatus::kConverged);
    EXPECT_LE(out.rounds, testing::closed_form_round_bound(start, top, delta));
    EXPECT_TRUE(out.winners.empty());
  }
}

}  // namespace
}  // namespace clockex
