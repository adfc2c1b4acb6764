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

// Domain types shared by every part of the exchange: resource pools, signed
// bundle vectors, XOR bids, price vectors, and auction outcomes.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace clockex {

// String identifier tagged by what it names, so pool ids and user ids cannot
// be mixed up.
template <typename Tag>
class Identifier {
 public:
  Identifier() = default;
  explicit Identifier(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const Identifier&, const Identifier&) = default;
  friend bool operator==(const Identifier&, const Identifier&) = default;

 private:
  std::string value_;
};

using PoolId = Identifier<struct PoolIdTag>;
using UserId = Identifier<struct UserIdTag>;

// One tradable pool: a resource dimension in one cluster.
struct ResourcePool {
  PoolId id;
  std::string cluster;
  std::string kind;  // cpu, ram, disk, ...
  std::string unit;
  double cost = 0.0;         // currency per resource unit
  double utilization = 0.0;  // pre-auction utilization in [0, 1]
  // Per-pool break-even utilization; the market curve's value otherwise.
  std::optional<double> psi_star;
};

// Throws kInvalidInput on negative cost or utilization outside [0, 1].
void validate(const ResourcePool& pool);

// Sparse signed quantity vector keyed by pool. Positive entries are demanded,
// negative entries offered; missing pools are zero.
class BundleVector {
 public:
  using Map = std::map<PoolId, double>;

  BundleVector() = default;
  explicit BundleVector(Map quantities) : quantities_(std::move(quantities)) {}
  BundleVector(std::initializer_list<Map::value_type> init) : quantities_(init) {}

  double operator[](const PoolId& pool) const;
  void set(const PoolId& pool, double quantity) { quantities_[pool] = quantity; }
  void add(const PoolId& pool, double quantity) { quantities_[pool] += quantity; }

  const Map& entries() const { return quantities_; }
  bool is_zero() const;
  bool empty() const { return quantities_.empty(); }

  BundleVector& operator+=(const BundleVector& other);
  BundleVector scaled(double factor) const;

  friend BundleVector operator+(BundleVector lhs, const BundleVector& rhs) {
    lhs += rhs;
    return lhs;
  }
  // Equal when every pool's quantity matches, treating absent pools as zero.
  friend bool operator==(const BundleVector& lhs, const BundleVector& rhs);

 private:
  Map quantities_;
};

enum class BidderClass { kPureBuyer, kPureSeller, kTrader };

std::string_view to_string(BidderClass cls);

// A user's XOR bid: any one of `bundles`, for at most `willingness` (buyers,
// positive) or at least -`willingness` in revenue (sellers, negative).
class Bid {
 public:
  // Throws kInvalidBid for an empty list, an all-zero bundle or a non-finite
  // value, and kBudgetExceeded when a positive willingness tops the budget.
  Bid(UserId user, std::vector<BundleVector> bundles, double willingness,
      std::optional<double> budget = std::nullopt);

  const UserId& user() const { return user_; }
  const std::vector<BundleVector>& bundles() const { return bundles_; }
  double willingness() const { return willingness_; }
  const std::optional<double>& budget() const { return budget_; }

  // Every pool referenced by any bundle.
  std::set<PoolId> pools() const;

  friend bool operator==(const Bid&, const Bid&) = default;

 private:
  UserId user_;
  std::vector<BundleVector> bundles_;
  double willingness_;
  std::optional<double> budget_;
};

// Uniform per-unit prices. All components are nonnegative.
class PriceVector {
 public:
  using Map = std::map<PoolId, double>;

  PriceVector() = default;
  // Throws kInvalidInput on a negative or non-finite price.
  explicit PriceVector(Map prices);
  PriceVector(std::initializer_list<Map::value_type> init);

  // Throws kUnknownPool when the pool has no price.
  double at(const PoolId& pool) const;
  std::optional<double> find(const PoolId& pool) const;
  bool contains(const PoolId& pool) const { return prices_.contains(pool); }
  void set(const PoolId& pool, double price);

  const Map& entries() const { return prices_; }
  std::size_t size() const { return prices_.size(); }

  friend bool operator==(const PriceVector&, const PriceVector&) = default;

 private:
  Map prices_;
};

// The pool set of one market, sorted by pool id. Pool indices used by the
// clock engine are positions in this order.
class Market {
 public:
  Market() = default;
  // Throws kInvalidConfig on duplicate ids and kInvalidInput on bad pools.
  explicit Market(std::vector<ResourcePool> pools);

  std::span<const ResourcePool> pools() const { return pools_; }
  std::size_t size() const { return pools_.size(); }
  bool empty() const { return pools_.empty(); }

  std::optional<std::size_t> index_of(const PoolId& id) const;
  const ResourcePool* find(const PoolId& id) const;
  // Throws kUnknownPool.
  const ResourcePool& at(const PoolId& id) const;

 private:
  std::vector<ResourcePool> pools_;
};

// Congestion weighting curve phi(psi) = k^(psi^m - psi_star^m).
struct ReserveCurve {
  double k = 10.0;
  double m = 2.0;
  double psi_star = 0.6;

  friend bool operator==(const ReserveCurve&, const ReserveCurve&) = default;
};

// Throws kInvalidConfig unless k > 1, m > 1 and 0 < psi_star < 1.
void validate(const ReserveCurve& curve);

enum class IncrementMode {
  kFractionalCap,  // cap_r = delta * p_r
  kAbsoluteCap,    // cap_r = delta
};

std::string_view to_string(IncrementMode mode);
std::optional<IncrementMode> parse_increment_mode(std::string_view text);

struct MarketConfig {
  double alpha = 1.0;
  double delta = 0.1;
  IncrementMode increment_mode = IncrementMode::kFractionalCap;
  bool normalize_increments = false;
  int max_rounds = 10000;
  std::optional<PriceVector> price_ceiling;
  ReserveCurve reserve_curve;

  friend bool operator==(const MarketConfig&, const MarketConfig&) = default;
};

// Throws kInvalidConfig on a violated parameter constraint.
void validate(const MarketConfig& config);

enum class AuctionStatus { kConverged, kRoundLimit, kPriceCeiling };

std::string_view to_string(AuctionStatus status);

// Dense per-round snapshot; vectors are aligned with AuctionOutcome::pools.
struct TrajectoryPoint {
  int round = 0;
  std::vector<double> prices;
  std::vector<double> excess_demand;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct AuctionOutcome {
  AuctionStatus status = AuctionStatus::kConverged;
  PriceVector final_prices;
  // Every bidder on convergence (losers hold a zero vector); empty when a
  // guard stopped the auction.
  std::map<UserId, BundleVector> allocations;
  std::set<UserId> winners;
  std::set<UserId> losers;
  int rounds = 0;  // index of the last evaluated round
  std::vector<PoolId> pools;
  std::vector<TrajectoryPoint> trajectory;

  bool converged() const { return status == AuctionStatus::kConverged; }
  // Zero vector when the user has no allocation entry.
  BundleVector allocation(const UserId& user) const;
};

BidderClass classify_bidder(const Bid& bid);

// Inner product q.p; throws kUnknownPool if the bundle references an
// unpriced pool.
double bundle_cost(const BundleVector& bundle, const PriceVector& prices);

BundleVector aggregate_demand(std::span<const BundleVector> allocations);

// Throws kUnknownPool naming the first pool of `bid` missing from `market`.
void check_pools(const Bid& bid, const Market& market);

}  // namespace clockex
