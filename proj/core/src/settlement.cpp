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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "clockex/errors.hpp"

namespace clockex {

namespace {

double slack(double tolerance, double a, double b) {
  return tolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

bool same_bundle(const BundleVector& a, const BundleVector& b, double tolerance) {
  auto within = [&](const BundleVector& lhs, const BundleVector& rhs) {
    for (const auto& [pool, quantity] : lhs.entries()) {
      if (std::abs(quantity - rhs[pool]) > slack(tolerance, quantity, rhs[pool])) {
        return false;
      }
    }
    return true;
  };
  return within(a, b) && within(b, a);
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

// Minimum bundle cost, with pools missing from `prices` priced at zero so a
// malformed outcome is still reported rather than thrown.
double cheapest(const Bid& bid, const PriceVector& prices) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& bundle : bid.bundles()) {
    double cost = 0.0;
    for (const auto& [pool, quantity] : bundle.entries()) {
      cost += quantity * prices.find(pool).value_or(0.0);
    }
    best = std::min(best, cost);
  }
  return best;
}

double value_at(const BundleVector& bundle, const PriceVector& prices) {
  double cost = 0.0;
  for (const auto& [pool, quantity] : bundle.entries()) {
    cost += quantity * prices.find(pool).value_or(0.0);
  }
  return cost;
}

}  // namespace

FeasibilityReport verify_feasibility(std::span<const Bid> bids, const AuctionOutcome& outcome,
                                     double tolerance) {
  std::map<UserId, const Bid*> by_user;
  for (const auto& bid : bids) by_user.emplace(bid.user(), &bid);
  auto require_known = [&](const UserId& user) {
    if (!by_user.contains(user)) {
      throw Error(ErrorCode::kMismatch, "outcome references user without a bid: " + user.str());
    }
  };
  for (const auto& entry : outcome.allocations) require_known(entry.first);
  for (const auto& user : outcome.winners) require_known(user);
  for (const auto& user : outcome.losers) require_known(user);

  FeasibilityReport report;
  auto flag = [&](int constraint, const std::string& subject, std::string detail) {
    report.violations.push_back(Violation{constraint, subject, std::move(detail)});
  };
  const PriceVector& prices = outcome.final_prices;

  // (1) whole bundles or nothing, consistent with the winner/loser split.
  for (const auto& [user, bid] : by_user) {
    const BundleVector x = outcome.allocation(user);
    const bool winner = outcome.winners.contains(user);
    const bool loser = outcome.losers.contains(user);
    if (winner == loser) {
      flag(1, user.str(), winner ? "user is both winner and loser"
                                 : "user is neither winner nor loser");
    }
    if (x.is_zero()) {
      if (winner) flag(1, user.str(), "winner holds no bundle");
      continue;
    }
    if (loser) flag(1, user.str(), "loser holds a nonzero allocation");
    const auto& bundles = bid->bundles();
    const bool listed = std::any_of(bundles.begin(), bundles.end(), [&](const BundleVector& q) {
      return same_bundle(x, q, tolerance);
    });
    if (!listed) flag(1, user.str(), "allocation is not one of the bid's bundles");
  }

  // (2) net surplus in every pool.
  std::map<PoolId, std::pair<double, double>> net;  // pool -> (sum, gross)
  for (const auto& [user, x] : outcome.allocations) {
    for (const auto& [pool, quantity] : x.entries()) {
      net[pool].first += quantity;
      net[pool].second += std::abs(quantity);
    }
  }
  for (const auto& [pool, sums] : net) {
    if (sums.first > tolerance * std::max(1.0, sums.second)) {
      flag(2, pool.str(), "net demand " + fmt(sums.first) + " exceeds supply");
    }
  }

  // (3)-(5) pricing conditions.
  for (const auto& [user, bid] : by_user) {
    const double pi = bid->willingness();
    const double best = cheapest(*bid, prices);
    if (outcome.winners.contains(user)) {
      const BundleVector x = outcome.allocation(user);
      if (x.is_zero()) continue;
      const double paid = value_at(x, prices);
      if (paid - pi > slack(tolerance, paid, pi)) {
        flag(3, user.str(), "willingness " + fmt(pi) + " below settled cost " + fmt(paid));
      }
      if (std::abs(paid - best) > slack(tolerance, paid, best)) {
        flag(4, user.str(), "settled cost " + fmt(paid) + " above cheapest bundle " + fmt(best));
      }
    } else if (outcome.losers.contains(user)) {
      if (pi - best > slack(tolerance, pi, best)) {
        flag(5, user.str(), "loser willingness " + fmt(pi) + " covers cheapest bundle " + fmt(best));
      }
    }
  }

  // (6) nonnegative prices.
  for (const auto& [pool, price] : prices.entries()) {
    if (price < 0.0) flag(6, pool.str(), "negative price " + fmt(price));
  }

  report.passed = report.violations.empty();
  return report;
}

double bid_premium(const Bid& bid, const BundleVector& allocation, const PriceVector& prices) {
  if (allocation.is_zero()) {
    throw Error(ErrorCode::kInvalidInput, "premium is defined for winners only");
  }
  const double settled = bundle_cost(allocation, prices);
  if (settled == 0.0) {
    throw Error(ErrorCode::kDivisionByZero,
                "settled value of " + bid.user().str() + " is zero; premium undefined");
  }
  return std::abs(bid.willingness() - settled) / std::abs(settled);
}

std::string_view to_string(TradeSide side) {
  return side == TradeSide::kBid ? "bid" : "offer";
}

SettlementStats settlement_stats(std::span<const Bid> bids, const AuctionOutcome& outcome,
                                 const Market& market, const PriceVector& baseline_prices) {
  if (!outcome.converged()) {
    throw Error(ErrorCode::kInfeasibleOutcome,
                std::string("auction did not converge (") +
                    std::string(to_string(outcome.status)) + ")");
  }
  const FeasibilityReport report = verify_feasibility(bids, outcome);
  if (!report.passed) {
    const Violation& first = report.violations.front();
    throw Error(ErrorCode::kInfeasibleOutcome,
                "outcome violates constraint " + std::to_string(first.constraint) + " for " +
                    first.subject + ": " + first.detail);
  }

  SettlementStats stats;
  std::vector<double> values;
  for (const auto& bid : bids) {
    if (!outcome.winners.contains(bid.user())) continue;
    const BundleVector x = outcome.allocation(bid.user());
    try {
      const double gamma = bid_premium(bid, x, outcome.final_prices);
      stats.premiums.emplace(bid.user(), gamma);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDivisionByZero) throw;
      stats.undefined_premiums.push_back(bid.user());
    }
    for (const auto& [pool, quantity] : x.entries()) {
      if (quantity == 0.0) continue;
      stats.utilization_records.push_back(
          UtilizationRecord{bid.user(), pool, quantity > 0.0 ? TradeSide::kBid : TradeSide::kOffer,
                            market.at(pool).utilization});
    }
  }
  std::sort(stats.utilization_records.begin(), stats.utilization_records.end(),
            [](const UtilizationRecord& a, const UtilizationRecord& b) {
              return std::tie(a.user, a.pool) < std::tie(b.user, b.pool);
            });

  for (const auto& entry : stats.premiums) values.push_back(entry.second);
  if (!values.empty()) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    stats.median_premium =
        n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    stats.mean_premium = std::accumulate(values.begin(), values.end(), 0.0) / n;
  }

  const std::size_t decided = outcome.winners.size() + outcome.losers.size();
  if (decided > 0) {
    stats.percent_settled = 100.0 * outcome.winners.size() / decided;
  }

  for (const auto& [pool, baseline] : baseline_prices.entries()) {
    auto final_price = outcome.final_prices.find(pool);
    if (!final_price || !(baseline > 0.0)) continue;
    stats.price_ratios.emplace(pool, *final_price / baseline);
  }
  return stats;
}

}  // namespace clockex
