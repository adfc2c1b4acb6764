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

// The long-running exchange: auction windows that collect bids, republish
// preliminary prices while open, and settle once after closing. Every state
// change is appended to a ledger so a settled window can be replayed.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "clockex/market.hpp"

namespace clockex {

class Ledger;

using WindowId = Identifier<struct WindowIdTag>;
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using ClockFn = std::function<Timestamp()>;

Timestamp system_now();

// How many units of each pool kind one unit of a service needs.
struct RequirementTranslation {
  std::string service;
  std::map<std::string, double> coefficients;  // pool kind -> per service unit
};

// Throws kInvalidInput on a negative coefficient.
void validate(const RequirementTranslation& table);

// Expands service units into a demand bundle over `cluster`'s pools. Throws
// kUnknownService for a service without a table and kUnknownPool when the
// cluster has no pool of a needed kind.
BundleVector translate_requirements(const std::map<std::string, double>& request,
                                    std::span<const RequirementTranslation> tables,
                                    const Market& market, const std::string& cluster);

// Everything a market configuration file describes.
struct MarketDefinition {
  std::vector<ResourcePool> pools;
  MarketConfig config;
  PriceVector baseline_prices;
  std::vector<RequirementTranslation> translations;
  std::chrono::seconds preliminary_cadence{60};
  std::chrono::seconds window_duration{3600};
};

enum class WindowState { kOpen, kClosed, kSettled };

std::string_view to_string(WindowState state);

struct AuctionWindow {
  WindowId id;
  WindowState state = WindowState::kOpen;
  Timestamp opened_at;
  Timestamp closes_at;
  Market market;
  MarketConfig config;
  PriceVector reserves;
  std::map<UserId, Bid> bids;
  std::optional<AuctionOutcome> preliminary;
  std::optional<AuctionOutcome> final;
};

struct BidAck {
  WindowId window;
  UserId user;
  std::uint64_t sequence = 0;  // ledger sequence number of the submission
  bool replaced = false;
};

struct PoolSummary {
  PoolId pool;
  std::string cluster;
  std::string kind;
  std::string unit;
  double price = 0.0;
  double reserve = 0.0;
  int bids = 0;    // users demanding this pool in some bundle
  int offers = 0;  // users offering this pool in some bundle
  double utilization = 0.0;
};

struct MarketSummary {
  WindowId window;
  WindowState state = WindowState::kOpen;
  Timestamp closes_at;
  bool prices_final = false;
  std::optional<AuctionStatus> status;  // of the outcome the prices come from
  std::vector<PoolSummary> pools;
};

class Exchange {
 public:
  // A null ledger records nothing. `clock` defaults to the system clock.
  explicit Exchange(std::shared_ptr<Ledger> ledger = nullptr, ClockFn clock = nullptr);
  ~Exchange();

  Exchange(const Exchange&) = delete;
  Exchange& operator=(const Exchange&) = delete;

  // Throws kInvalidConfig for an empty or duplicate pool list, a bad config
  // or a nonpositive duration. Window ids are w1, w2, ... in opening order.
  WindowId open_window(std::vector<ResourcePool> pools, MarketConfig config,
                       std::chrono::milliseconds duration);

  // Stores the bid, replacing the user's previous one. Throws kNotFound,
  // kWindowClosed and kUnknownPool.
  BidAck submit_bid(const WindowId& window, Bid bid);

  // Runs the auction on a snapshot of the current bids from reserve prices.
  // Submissions are not blocked while it runs. Throws kWindowClosed unless
  // the window is open.
  AuctionOutcome run_preliminary(const WindowId& window);

  // open -> closed. Throws kWrongState otherwise.
  void close_window(const WindowId& window);

  // closed -> settled with a binding outcome. A guard outcome settles with no
  // allocations. Throws kWrongState unless closed and kSettlementInfeasible
  // if a converged outcome fails verification.
  AuctionOutcome finalize_window(const WindowId& window);

  MarketSummary market_summary(const WindowId& window) const;

  // Copy of the window's current state. Throws kNotFound.
  AuctionWindow window(const WindowId& window) const;
  std::vector<WindowId> windows() const;

  // Closes windows whose deadline has passed and refreshes preliminary
  // prices of the ones still open. Called periodically by the server.
  void tick();

  Timestamp now() const { return clock_(); }

 private:
  struct Slot;

  std::shared_ptr<Slot> slot(const WindowId& window) const;

  std::shared_ptr<Ledger> ledger_;
  ClockFn clock_;
  mutable std::shared_mutex windows_mu_;
  std::map<WindowId, std::shared_ptr<Slot>> windows_;
  std::uint64_t next_window_ = 1;
};

struct ReplayedWindow {
  WindowId window;
  std::string recorded;  // canonical outcome record from the ledger
  std::string replayed;  // the same record recomputed from the replay
  bool identical = false;
};

struct ReplayReport {
  std::vector<ReplayedWindow> windows;
  bool all_identical() const;
};

// Rebuilds every window from a ledger stream and re-finalizes each settled
// one. Throws kParse on a malformed line.
ReplayReport replay_ledger(std::istream& ledger);

}  // namespace clockex
