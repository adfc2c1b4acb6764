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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "clockex/errors.hpp"
#include "clockex/reserve.hpp"

namespace clockex {

namespace {

using Entry = std::pair<std::size_t, double>;
using CompiledBundle = std::vector<Entry>;

struct CompiledBid {
  std::vector<CompiledBundle> bundles;
  double willingness;
};

// Dense per-pool parameters of the increment rule.
struct IncrementRule {
  std::vector<double> alpha;  // alpha_r after optional normalization
  std::vector<double> floor_cap;
  const MarketConfig* config;
};

bool positive_demand(double z, double gross) {
  return z > kDemandTolerance * std::max(1.0, gross);
}

double component_increment(double z, double gross, double price, double alpha,
                           double floor_cap, const MarketConfig& config) {
  if (!positive_demand(z, gross)) return 0.0;
  double cap = config.delta;
  if (config.increment_mode == IncrementMode::kFractionalCap) {
    cap = price > 0.0 ? config.delta * price : floor_cap;
  }
  return std::min(alpha * z, cap);
}

IncrementRule make_rule(const Market& market, const std::vector<PoolId>& pools,
                        const MarketConfig& config) {
  IncrementRule rule;
  rule.config = &config;
  rule.alpha.assign(pools.size(), config.alpha);
  rule.floor_cap.assign(pools.size(), config.delta);
  std::vector<double> reserves(pools.size(), 0.0);
  for (std::size_t r = 0; r < pools.size(); ++r) {
    const ResourcePool& pool = market.at(pools[r]);
    // A pool that is free and costless still needs a way off zero.
    if (pool.cost > 0.0) rule.floor_cap[r] = config.delta * pool.cost;
    reserves[r] = reserve_price(pool, config.reserve_curve);
  }
  if (config.normalize_increments && !reserves.empty()) {
    const double top = *std::max_element(reserves.begin(), reserves.end());
    if (top > 0.0) {
      for (std::size_t r = 0; r < pools.size(); ++r) {
        // Zero-reserve pools have no base to scale against.
        if (reserves[r] > 0.0) rule.alpha[r] = config.alpha * reserves[r] / top;
      }
    }
  }
  return rule;
}

std::vector<double> increments(const IncrementRule& rule, const std::vector<double>& z,
                               const std::vector<double>& gross,
                               const std::vector<double>& prices) {
  std::vector<double> out(z.size(), 0.0);
  for (std::size_t r = 0; r < z.size(); ++r) {
    out[r] = component_increment(z[r], gross[r], prices[r], rule.alpha[r],
                                 rule.floor_cap[r], *rule.config);
  }
  return out;
}

double compiled_cost(const CompiledBundle& bundle, const std::vector<double>& prices) {
  double total = 0.0;
  for (const auto& [index, quantity] : bundle) total += quantity * prices[index];
  return total;
}

// Mirrors evaluate_proxy on dense prices.
std::optional<std::size_t> choose(const CompiledBid& bid, const std::vector<double>& prices) {
  std::size_t best = 0;
  double best_cost = compiled_cost(bid.bundles[0], prices);
  for (std::size_t i = 1; i < bid.bundles.size(); ++i) {
    const double cost = compiled_cost(bid.bundles[i], prices);
    if (cost < best_cost) {
      best = i;
      best_cost = cost;
    }
  }
  if (best_cost <= bid.willingness) return best;
  return std::nullopt;
}

PriceVector to_price_vector(const std::vector<PoolId>& pools, const std::vector<double>& dense) {
  PriceVector out;
  for (std::size_t r = 0; r < pools.size(); ++r) out.set(pools[r], dense[r]);
  return out;
}

}  // namespace

RoundState evaluate_round(std::span<const Bid> bids, const PriceVector& prices, int round) {
  RoundState state;
  state.round = round;
  state.prices = prices;
  for (const auto& bid : bids) {
    ProxyResponse response = evaluate_proxy(bid, prices);
    state.excess_demand += response.demand;
    state.responses.emplace(bid.user(), std::move(response));
  }
  return state;
}

std::map<PoolId, double> price_increment(const RoundState& state, const MarketConfig& config,
                                         const Market& market) {
  std::vector<PoolId> pools;
  std::vector<double> prices;
  for (const auto& [pool, price] : state.prices.entries()) {
    pools.push_back(pool);
    prices.push_back(price);
  }
  std::vector<double> z(pools.size(), 0.0);
  std::vector<double> gross(pools.size(), 0.0);
  for (std::size_t r = 0; r < pools.size(); ++r) {
    z[r] = state.excess_demand[pools[r]];
    for (const auto& [user, response] : state.responses) {
      gross[r] += std::abs(response.demand[pools[r]]);
    }
  }
  const IncrementRule rule = make_rule(market, pools, config);
  const std::vector<double> step = increments(rule, z, gross, prices);
  std::map<PoolId, double> out;
  for (std::size_t r = 0; r < pools.size(); ++r) out.emplace(pools[r], step[r]);
  return out;
}

AuctionOutcome run_auction(const Market& market, std::span<const Bid> bids,
                           const PriceVector& start_prices, const MarketConfig& config) {
  validate(config);

  std::vector<PoolId> pools;
  std::vector<double> prices;
  for (const auto& [pool, price] : start_prices.entries()) {
    if (!market.find(pool)) {
      throw Error(ErrorCode::kInvalidInput, "start price for unknown pool " + pool.str());
    }
    pools.push_back(pool);
    prices.push_back(price);
  }

  std::vector<CompiledBid> compiled;
  compiled.reserve(bids.size());
  std::set<UserId> seen;
  for (const auto& bid : bids) {
    if (!seen.insert(bid.user()).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate bid from user " + bid.user().str());
    }
    CompiledBid entry{{}, bid.willingness()};
    for (const auto& bundle : bid.bundles()) {
      CompiledBundle dense;
      for (const auto& [pool, quantity] : bundle.entries()) {
        auto it = std::lower_bound(pools.begin(), pools.end(), pool);
        if (it == pools.end() || *it != pool) {
          throw Error(ErrorCode::kInvalidInput, "bid from '" + bid.user().str() +
                                                    "' references unpriced pool " +
                                                    pool.str());
        }
        dense.emplace_back(static_cast<std::size_t>(it - pools.begin()), quantity);
      }
      entry.bundles.push_back(std::move(dense));
    }
    compiled.push_back(std::move(entry));
  }

  const IncrementRule rule = make_rule(market, pools, config);
  std::vector<double> ceiling(pools.size(), HUGE_VAL);
  if (config.price_ceiling) {
    for (std::size_t r = 0; r < pools.size(); ++r) {
      if (auto cap = config.price_ceiling->find(pools[r])) ceiling[r] = *cap;
    }
  }

  AuctionOutcome outcome;
  outcome.pools = pools;
  std::vector<std::optional<std::size_t>> chosen(compiled.size());
  for (int t = 0;; ++t) {
    std::vector<double> z(pools.size(), 0.0);
    std::vector<double> gross(pools.size(), 0.0);
    for (std::size_t u = 0; u < compiled.size(); ++u) {
      chosen[u] = choose(compiled[u], prices);
      if (!chosen[u]) continue;
      for (const auto& [index, quantity] : compiled[u].bundles[*chosen[u]]) {
        z[index] += quantity;
        gross[index] += std::abs(quantity);
      }
    }
    outcome.trajectory.push_back(TrajectoryPoint{t, prices, z});
    outcome.rounds = t;

    bool excess = false;
    for (std::size_t r = 0; r < pools.size(); ++r) {
      excess = excess || positive_demand(z[r], gross[r]);
    }
    if (!excess) {
      outcome.status = AuctionStatus::kConverged;
      outcome.final_prices = to_price_vector(pools, prices);
      for (std::size_t u = 0; u < compiled.size(); ++u) {
        const Bid& bid = bids[u];
        if (chosen[u]) {
          outcome.allocations.emplace(bid.user(), bid.bundles()[*chosen[u]]);
          outcome.winners.insert(bid.user());
        } else {
          outcome.allocations.emplace(bid.user(), BundleVector{});
          outcome.losers.insert(bid.user());
        }
      }
      return outcome;
    }

    auto stop = [&](AuctionStatus status) {
      outcome.status = status;
      outcome.final_prices = to_price_vector(pools, prices);
      for (const auto& bid : bids) outcome.losers.insert(bid.user());
      return outcome;
    };
    if (t + 1 >= config.max_rounds) return stop(AuctionStatus::kRoundLimit);

    const std::vector<double> step = increments(rule, z, gross, prices);
    std::vector<double> next(prices.size());
    for (std::size_t r = 0; r < prices.size(); ++r) {
      next[r] = prices[r] + step[r];
      if (next[r] > ceiling[r]) return stop(AuctionStatus::kPriceCeiling);
    }
    prices = std::move(next);
  }
}

}  // namespace clockex
