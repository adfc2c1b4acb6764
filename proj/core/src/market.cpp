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

#include "clockex/market.hpp"

#include <algorithm>
#include <cmath>

#include "clockex/errors.hpp"

namespace clockex {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const ResourcePool& pool) {
  if (pool.id.empty()) {
    throw Error(ErrorCode::kInvalidInput, "pool id must be nonempty");
  }
  if (!finite(pool.cost) || pool.cost < 0.0) {
    throw Error(ErrorCode::kInvalidInput,
                "pool " + pool.id.str() + ": cost must be finite and >= 0");
  }
  if (!(pool.utilization >= 0.0 && pool.utilization <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                "pool " + pool.id.str() + ": utilization must lie in [0, 1]");
  }
  if (pool.psi_star && !(*pool.psi_star > 0.0 && *pool.psi_star < 1.0)) {
    throw Error(ErrorCode::kInvalidInput,
                "pool " + pool.id.str() + ": psi_star must lie in (0, 1)");
  }
}

double BundleVector::operator[](const PoolId& pool) const {
  auto it = quantities_.find(pool);
  return it == quantities_.end() ? 0.0 : it->second;
}

bool BundleVector::is_zero() const {
  return std::all_of(quantities_.begin(), quantities_.end(),
                     [](const auto& entry) { return entry.second == 0.0; });
}

BundleVector& BundleVector::operator+=(const BundleVector& other) {
  for (const auto& [pool, quantity] : other.quantities_) {
    quantities_[pool] += quantity;
  }
  return *this;
}

BundleVector BundleVector::scaled(double factor) const {
  BundleVector out = *this;
  for (auto& [pool, quantity] : out.quantities_) quantity *= factor;
  return out;
}

bool operator==(const BundleVector& lhs, const BundleVector& rhs) {
  for (const auto& [pool, quantity] : lhs.quantities_) {
    if (rhs[pool] != quantity) return false;
  }
  for (const auto& [pool, quantity] : rhs.quantities_) {
    if (lhs[pool] != quantity) return false;
  }
  return true;
}

std::string_view to_string(BidderClass cls) {
  switch (cls) {
    case BidderClass::kPureBuyer: return "pure-buyer";
    case BidderClass::kPureSeller: return "pure-seller";
    case BidderClass::kTrader: return "trader";
  }
  return "unknown";
}

Bid::Bid(UserId user, std::vector<BundleVector> bundles, double willingness,
         std::optional<double> budget)
    : user_(std::move(user)),
      bundles_(std::move(bundles)),
      willingness_(willingness),
      budget_(budget) {
  const std::string who = "bid from '" + user_.str() + "'";
  if (user_.empty()) {
    throw Error(ErrorCode::kInvalidBid, "bid user id must be nonempty");
  }
  if (bundles_.empty()) {
    throw Error(ErrorCode::kInvalidBid, who + ": bundle list is empty");
  }
  for (std::size_t i = 0; i < bundles_.size(); ++i) {
    for (const auto& [pool, quantity] : bundles_[i].entries()) {
      if (!finite(quantity)) {
        throw Error(ErrorCode::kInvalidBid, who + ": bundle " + std::to_string(i) +
                                                " has a non-finite quantity for " +
                                                pool.str());
      }
    }
    if (bundles_[i].is_zero()) {
      throw Error(ErrorCode::kInvalidBid,
                  who + ": bundle " + std::to_string(i) + " is the zero vector");
    }
  }
  if (!finite(willingness_)) {
    throw Error(ErrorCode::kInvalidBid, who + ": willingness must be finite");
  }
  if (budget_) {
    if (!finite(*budget_) || *budget_ < 0.0) {
      throw Error(ErrorCode::kInvalidBid, who + ": budget must be finite and >= 0");
    }
    if (willingness_ > 0.0 && willingness_ > *budget_) {
      throw Error(ErrorCode::kBudgetExceeded,
                  who + ": willingness " + std::to_string(willingness_) +
                      " exceeds budget " + std::to_string(*budget_));
    }
  }
}

std::set<PoolId> Bid::pools() const {
  std::set<PoolId> out;
  for (const auto& bundle : bundles_) {
    for (const auto& entry : bundle.entries()) out.insert(entry.first);
  }
  return out;
}

PriceVector::PriceVector(Map prices) {
  for (const auto& [pool, price] : prices) set(pool, price);
}

PriceVector::PriceVector(std::initializer_list<Map::value_type> init) {
  for (const auto& [pool, price] : init) set(pool, price);
}

double PriceVector::at(const PoolId& pool) const {
  auto it = prices_.find(pool);
  if (it == prices_.end()) {
    throw Error(ErrorCode::kUnknownPool, "no price for pool " + pool.str());
  }
  return it->second;
}

std::optional<double> PriceVector::find(const PoolId& pool) const {
  auto it = prices_.find(pool);
  if (it == prices_.end()) return std::nullopt;
  return it->second;
}

void PriceVector::set(const PoolId& pool, double price) {
  if (!finite(price) || price < 0.0) {
    throw Error(ErrorCode::kInvalidInput,
                "price for pool " + pool.str() + " must be finite and >= 0");
  }
  prices_[pool] = price;
}

Market::Market(std::vector<ResourcePool> pools) : pools_(std::move(pools)) {
  for (const auto& pool : pools_) validate(pool);
  std::sort(pools_.begin(), pools_.end(),
            [](const ResourcePool& a, const ResourcePool& b) { return a.id < b.id; });
  auto dup = std::adjacent_find(
      pools_.begin(), pools_.end(),
      [](const ResourcePool& a, const ResourcePool& b) { return a.id == b.id; });
  if (dup != pools_.end()) {
    throw Error(ErrorCode::kInvalidConfig, "duplicate pool id " + dup->id.str());
  }
}

std::optional<std::size_t> Market::index_of(const PoolId& id) const {
  auto it = std::lower_bound(
      pools_.begin(), pools_.end(), id,
      [](const ResourcePool& pool, const PoolId& key) { return pool.id < key; });
  if (it == pools_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - pools_.begin());
}

const ResourcePool* Market::find(const PoolId& id) const {
  auto index = index_of(id);
  return index ? &pools_[*index] : nullptr;
}

const ResourcePool& Market::at(const PoolId& id) const {
  const ResourcePool* pool = find(id);
  if (pool == nullptr) {
    throw Error(ErrorCode::kUnknownPool, "unknown pool " + id.str());
  }
  return *pool;
}

void validate(const ReserveCurve& curve) {
  if (!(curve.k > 1.0) || !finite(curve.k)) {
    throw Error(ErrorCode::kInvalidConfig, "reserve curve k must be > 1");
  }
  if (!(curve.m > 1.0) || !finite(curve.m)) {
    throw Error(ErrorCode::kInvalidConfig, "reserve curve m must be > 1");
  }
  if (!(curve.psi_star > 0.0 && curve.psi_star < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "reserve curve psi_star must lie in (0, 1)");
  }
}

std::string_view to_string(IncrementMode mode) {
  switch (mode) {
    case IncrementMode::kFractionalCap: return "fractional-cap";
    case IncrementMode::kAbsoluteCap: return "absolute-cap";
  }
  return "unknown";
}

std::optional<IncrementMode> parse_increment_mode(std::string_view text) {
  if (text == "fractional-cap") return IncrementMode::kFractionalCap;
  if (text == "absolute-cap") return IncrementMode::kAbsoluteCap;
  return std::nullopt;
}

void validate(const MarketConfig& config) {
  if (!(config.alpha > 0.0) || !finite(config.alpha)) {
    throw Error(ErrorCode::kInvalidConfig, "alpha must be > 0");
  }
  if (!(config.delta > 0.0) || !finite(config.delta)) {
    throw Error(ErrorCode::kInvalidConfig, "delta must be > 0");
  }
  if (config.increment_mode == IncrementMode::kFractionalCap && !(config.delta < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "delta must lie in (0, 1) in fractional-cap mode");
  }
  if (config.max_rounds < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_rounds must be >= 1");
  }
  validate(config.reserve_curve);
}

std::string_view to_string(AuctionStatus status) {
  switch (status) {
    case AuctionStatus::kConverged: return "converged";
    case AuctionStatus::kRoundLimit: return "round-limit";
    case AuctionStatus::kPriceCeiling: return "price-ceiling";
  }
  return "unknown";
}

BundleVector AuctionOutcome::allocation(const UserId& user) const {
  auto it = allocations.find(user);
  return it == allocations.end() ? BundleVector{} : it->second;
}

BidderClass classify_bidder(const Bid& bid) {
  bool any_positive = false;
  bool any_negative = false;
  for (const auto& bundle : bid.bundles()) {
    for (const auto& entry : bundle.entries()) {
      any_positive |= entry.second > 0.0;
      any_negative |= entry.second < 0.0;
    }
  }
  if (any_positive && any_negative) return BidderClass::kTrader;
  return any_negative ? BidderClass::kPureSeller : BidderClass::kPureBuyer;
}

double bundle_cost(const BundleVector& bundle, const PriceVector& prices) {
  double total = 0.0;
  for (const auto& [pool, quantity] : bundle.entries()) {
    total += quantity * prices.at(pool);
  }
  return total;
}

BundleVector aggregate_demand(std::span<const BundleVector> allocations) {
  BundleVector total;
  for (const auto& allocation : allocations) total += allocation;
  return total;
}

void check_pools(const Bid& bid, const Market& market) {
  for (const auto& bundle : bid.bundles()) {
    for (const auto& entry : bundle.entries()) {
      if (!market.find(entry.first)) {
        throw Error(ErrorCode::kUnknownPool, "bid from '" + bid.user().str() +
                                                 "' references unknown pool " +
                                                 entry.first.str());
      }
    }
  }
}

}  // namespace clockex
