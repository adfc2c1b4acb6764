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

#include "clockex/proxy.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "clockex/errors.hpp"
#include "test_support.hpp"

namespace clockex {
namespace {

using testing::pool;
using testing::user;

Bid two_bundle_bid() {
  return Bid(user("u"), {BundleVector{{pool("A"), 2}}, BundleVector{{pool("B"), 3}}}, 10);
}

TEST(EvaluateProxy, PicksCheapestAffordableBundle) {
  const auto r = evaluate_proxy(two_bundle_bid(), PriceVector{{pool("A"), 3}, {pool("B"), 1}});
  ASSERT_TRUE(r.active);
  EXPECT_EQ(r.chosen_index, 1u);
  EXPECT_EQ(r.demand, (BundleVector{{pool("B"), 3}}));
}

TEST(EvaluateProxy, InactiveWhenEverythingTooExpensive) {
  const auto r = evaluate_proxy(two_bundle_bid(), PriceVector{{pool("A"), 6}, {pool("B"), 5}});
  EXPECT_FALSE(r.active);
  EXPECT_FALSE(r.chosen_index.has_value());
  EXPECT_TRUE(r.demand.is_zero());
}

TEST(EvaluateProxy, SellerBoundaryIsInclusive) {
  const Bid seller(user("s"), {BundleVector{{pool("A"), -1}}}, -2);
  EXPECT_FALSE(evaluate_proxy(seller, PriceVector{{pool("A"), 1.5}}).active);
  const auto r = evaluate_proxy(seller, PriceVector{{pool("A"), 2}});
  ASSERT_TRUE(r.active);
  EXPECT_EQ(r.demand, (BundleVector{{pool("A"), -1}}));
}

TEST(EvaluateProxy, BuyerBoundaryIsInclusive) {
  const Bid buyer(user("b"), {BundleVector{{pool("A"), 2}}}, 10);
  EXPECT_TRUE(evaluate_proxy(buyer, PriceVector{{pool("A"), 5}}).active);
  EXPECT_FALSE(evaluate_proxy(buyer, PriceVector{{pool("A"), std::nextafter(5.0, 6.0)}}).active);
}

TEST(EvaluateProxy, TiesGoToLowestIndex) {
  const auto r = evaluate_proxy(two_bundle_bid(), PriceVector{{pool("A"), 3}, {pool("B"), 2}});
  ASSERT_TRUE(r.active);
  EXPECT_EQ(r.chosen_index, 0u);
  EXPECT_EQ(r.demand, (BundleVector{{pool("A"), 2}}));
}

TEST(EvaluateProxy, UnknownPoolPropagates) {
  try {
    evaluate_proxy(two_bundle_bid(), PriceVector{{pool("A"), 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownPool);
  }
}

// Brute-force argmin over the bundle list.
std::size_t cheapest_index(const Bid& bid, const PriceVector& prices) {
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bid.bundles().size(); ++i) {
    double cost = 0;
    for (const auto& [p, q] : bid.bundles()[i].entries()) cost += q * prices.at(p);
    if (cost < best_cost) {
      best_cost = cost;
      best = i;
    }
  }
  return best;
}

class ProxyProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{2024};
  std::vector<PoolId> ids = {pool("a"), pool("b"), pool("c"), pool("d")};

  Bid random_buyer() {
    std::uniform_int_distribution<int> n(1, 3), q(1, 5);
    std::vector<BundleVector> bundles(n(rng));
    for (auto& b : bundles) {
      for (const auto& id : ids) {
        if (rng() % 2 || b.empty()) b.set(id, q(rng));
      }
    }
    return Bid(user("u"), bundles, std::uniform_real_distribution<double>(1, 50)(rng));
  }

  PriceVector random_prices() {
    PriceVector p;
    for (const auto& id : ids) p.set(id, std::uniform_real_distribution<double>(0, 10)(rng));
    return p;
  }
};

TEST_F(ProxyProperties, DropOutIsMonotoneForPureBuyers) {
  for (int trial = 0; trial < 500; ++trial) {
    const Bid bid = random_buyer();
    const PriceVector p = random_prices();
    if (evaluate_proxy(bid, p).active) continue;
    PriceVector higher;
    for (const auto& [id, price] : p.entries()) {
      higher.set(id, price + std::uniform_real_distribution<double>(0, 5)(rng));
    }
    EXPECT_FALSE(evaluate_proxy(bid, higher).active);
  }
}

TEST_F(ProxyProperties, ChosenBundleIsACheapestOne) {
  for (int trial = 0; trial < 500; ++trial) {
    const Bid bid = random_buyer();
    const PriceVector p = random_prices();
    const auto r = evaluate_proxy(bid, p);
    if (!r.active) continue;
    EXPECT_EQ(*r.chosen_index, cheapest_index(bid, p));
    EXPECT_LE(bundle_cost(r.demand, p), bid.willingness());
    EXPECT_EQ(evaluate_proxy(bid, p), r);
  }
}

}  // namespace
}  // namespace clockex
