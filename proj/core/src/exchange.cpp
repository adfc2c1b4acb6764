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

#include "clockex/exchange.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <utility>

#include "clockex/clock.hpp"
#include "clockex/errors.hpp"
#include "clockex/json_io.hpp"
#include "clockex/ledger.hpp"
#include "clockex/reserve.hpp"
#include "clockex/settlement.hpp"

namespace clockex {

Timestamp system_now() {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
}

void validate(const RequirementTranslation& table) {
  for (const auto& [kind, coefficient] : table.coefficients) {
    if (!(coefficient >= 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "translation '" + table.service +
                                                "': coefficient for " + kind +
                                                " must be >= 0");
    }
  }
}

BundleVector translate_requirements(const std::map<std::string, double>& request,
                                    std::span<const RequirementTranslation> tables,
                                    const Market& market, const std::string& cluster) {
  BundleVector out;
  for (const auto& [service, units] : request) {
    auto table = std::find_if(tables.begin(), tables.end(), [&](const RequirementTranslation& t) {
      return t.service == service;
    });
    if (table == tables.end()) {
      throw Error(ErrorCode::kUnknownService, "no requirement table for service " + service);
    }
    for (const auto& [kind, coefficient] : table->coefficients) {
      if (coefficient == 0.0) continue;
      auto pool = std::find_if(market.pools().begin(), market.pools().end(),
                               [&](const ResourcePool& p) {
                                 return p.cluster == cluster && p.kind == kind;
                               });
      if (pool == market.pools().end()) {
        throw Error(ErrorCode::kUnknownPool,
                    "cluster " + cluster + " has no " + kind + " pool");
      }
      out.add(pool->id, units * coefficient);
    }
  }
  return out;
}

std::string_view to_string(WindowState state) {
  switch (state) {
    case WindowState::kOpen: return "open";
    case WindowState::kClosed: return "closed";
    case WindowState::kSettled: return "settled";
  }
  return "unknown";
}

struct Exchange::Slot {
  mutable std::mutex mu;
  AuctionWindow window;
  std::uint64_t snapshots_taken = 0;
  std::uint64_t preliminary_snapshot = 0;  // snapshot behind window.preliminary
};

Exchange::Exchange(std::shared_ptr<Ledger> ledger, ClockFn clock)
    : ledger_(std::move(ledger)), clock_(clock ? std::move(clock) : ClockFn(system_now)) {}

Exchange::~Exchange() = default;

std::shared_ptr<Exchange::Slot> Exchange::slot(const WindowId& window) const {
  std::shared_lock lock(windows_mu_);
  auto it = windows_.find(window);
  if (it == windows_.end()) {
    throw Error(ErrorCode::kNotFound, "no window " + window.str());
  }
  return it->second;
}

WindowId Exchange::open_window(std::vector<ResourcePool> pools, MarketConfig config,
                               std::chrono::milliseconds duration) {
  if (pools.empty()) throw Error(ErrorCode::kInvalidConfig, "window needs at least one pool");
  if (duration.count() <= 0) throw Error(ErrorCode::kInvalidConfig, "duration must be positive");
  validate(config);
  const std::vector<ResourcePool> listed = pools;
  auto next = std::make_shared<Slot>();
  AuctionWindow& w = next->window;
  try {
    w.market = Market(std::move(pools));
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  w.config = std::move(config);
  w.reserves = reserve_vector(w.market.pools(), w.config.reserve_curve);
  w.opened_at = now();
  w.closes_at = w.opened_at + duration;

  std::unique_lock lock(windows_mu_);
  w.id = WindowId("w" + std::to_string(next_window_++));
  windows_.emplace(w.id, next);
  if (ledger_) {
    json encoded_pools = json::array();
    for (const auto& pool : listed) encoded_pools.push_back(encode(pool));
    ledger_->append("window_opened", w.opened_at,
                    {{"window_id", w.id.str()},
                     {"opened_at", w.opened_at.time_since_epoch().count()},
                     {"closes_at", w.closes_at.time_since_epoch().count()},
                     {"pools", std::move(encoded_pools)},
                     {"config", encode(w.config)}});
  }
  return w.id;
}

BidAck Exchange::submit_bid(const WindowId& window, Bid bid) {
  auto s = slot(window);
  std::lock_guard lock(s->mu);
  AuctionWindow& w = s->window;
  if (w.state != WindowState::kOpen) {
    throw Error(ErrorCode::kWindowClosed, "window " + window.str() + " is " +
                                              std::string(to_string(w.state)));
  }
  check_pools(bid, w.market);
  BidAck ack{window, bid.user(), 0, w.bids.contains(bid.user())};
  if (ledger_) {
    ack.sequence = ledger_->append("bid_submitted", now(),
                                   {{"window_id", window.str()}, {"bid", encode(bid)}});
  }
  w.bids.insert_or_assign(bid.user(), std::move(bid));
  return ack;
}

AuctionOutcome Exchange::run_preliminary(const WindowId& window) {
  auto s = slot(window);
  std::vector<Bid> snapshot;
  Market market;
  MarketConfig config;
  PriceVector start;
  std::uint64_t snapshot_id = 0;
  {
    std::lock_guard lock(s->mu);
    const AuctionWindow& w = s->window;
    if (w.state != WindowState::kOpen) {
      throw Error(ErrorCode::kWindowClosed, "window " + window.str() + " is not open");
    }
    for (const auto& entry : w.bids) snapshot.push_back(entry.second);
    market = w.market;
    config = w.config;
    start = w.reserves;
    snapshot_id = ++s->snapshots_taken;
  }

  AuctionOutcome outcome = run_auction(market, snapshot, start, config);

  std::lock_guard lock(s->mu);
  if (snapshot_id > s->preliminary_snapshot && s->window.state == WindowState::kOpen) {
    s->preliminary_snapshot = snapshot_id;
    s->window.preliminary = outcome;
    if (ledger_) {
      ledger_->append("preliminary_published", now(),
                      {{"window_id", window.str()},
                       {"bids", snapshot.size()},
                       {"status", std::string(to_string(outcome.status))},
                       {"rounds", outcome.rounds},
                       {"final_prices", encode(outcome.final_prices)}});
    }
  }
  return outcome;
}

void Exchange::close_window(const WindowId& window) {
  auto s = slot(window);
  std::lock_guard lock(s->mu);
  if (s->window.state != WindowState::kOpen) {
    throw Error(ErrorCode::kWrongState, "window " + window.str() + " is not open");
  }
  s->window.state = WindowState::kClosed;
  if (ledger_) ledger_->append("window_closed", now(), {{"window_id", window.str()}});
}

AuctionOutcome Exchange::finalize_window(const WindowId& window) {
  auto s = slot(window);
  std::lock_guard lock(s->mu);
  AuctionWindow& w = s->window;
  if (w.state != WindowState::kClosed) {
    throw Error(ErrorCode::kWrongState,
                "window " + window.str() + " is " + std::string(to_string(w.state)) +
                    "; only closed windows can be finalized");
  }
  std::vector<Bid> bids;
  for (const auto& entry : w.bids) bids.push_back(entry.second);
  AuctionOutcome outcome = run_auction(w.market, bids, w.reserves, w.config);
  if (outcome.converged()) {
    const FeasibilityReport report = verify_feasibility(bids, outcome);
    if (!report.passed) {
      const Violation& v = report.violations.front();
      throw Error(ErrorCode::kSettlementInfeasible,
                  "settlement of " + window.str() + " violates constraint " +
                      std::to_string(v.constraint) + " (" + v.subject + "): " + v.detail);
    }
  }
  w.final = outcome;
  w.state = WindowState::kSettled;
  if (ledger_) {
    ledger_->append("window_finalized", now(),
                    {{"window_id", window.str()}, {"outcome", encode(outcome)}});
  }
  return outcome;
}

MarketSummary Exchange::market_summary(const WindowId& window) const {
  auto s = slot(window);
  std::lock_guard lock(s->mu);
  const AuctionWindow& w = s->window;
  MarketSummary summary;
  summary.window = w.id;
  summary.state = w.state;
  summary.closes_at = w.closes_at;
  const AuctionOutcome* source = nullptr;
  if (w.final) {
    source = &*w.final;
    summary.prices_final = true;
  } else if (w.preliminary) {
    source = &*w.preliminary;
  }
  if (source) summary.status = source->status;

  for (const auto& pool : w.market.pools()) {
    PoolSummary row;
    row.pool = pool.id;
    row.cluster = pool.cluster;
    row.kind = pool.kind;
    row.unit = pool.unit;
    row.reserve = w.reserves.at(pool.id);
    row.price = row.reserve;
    if (source) row.price = source->final_prices.find(pool.id).value_or(row.reserve);
    row.utilization = pool.utilization;
    for (const auto& [user, bid] : w.bids) {
      bool demands = false;
      bool offers = false;
      for (const auto& bundle : bid.bundles()) {
        const double q = bundle[pool.id];
        demands = demands || q > 0.0;
        offers = offers || q < 0.0;
      }
      row.bids += demands ? 1 : 0;
      row.offers += offers ? 1 : 0;
    }
    summary.pools.push_back(std::move(row));
  }
  return summary;
}

AuctionWindow Exchange::window(const WindowId& window) const {
  auto s = slot(window);
  std::lock_guard lock(s->mu);
  return s->window;
}

std::vector<WindowId> Exchange::windows() const {
  std::shared_lock lock(windows_mu_);
  std::vector<WindowId> out;
  for (const auto& entry : windows_) out.push_back(entry.first);
  return out;
}

void Exchange::tick() {
  for (const auto& id : windows()) {
    auto s = slot(id);
    bool expired = false;
    bool open = false;
    {
      std::lock_guard lock(s->mu);
      open = s->window.state == WindowState::kOpen;
      expired = open && now() >= s->window.closes_at;
    }
    try {
      if (expired) {
        close_window(id);
      } else if (open) {
        run_preliminary(id);
      }
    } catch (const Error& e) {
      // Lost a race with an operator close; the next tick sees the new state.
      if (e.code() != ErrorCode::kWrongState && e.code() != ErrorCode::kWindowClosed) throw;
    }
  }
}

bool ReplayReport::all_identical() const {
  return std::all_of(windows.begin(), windows.end(),
                     [](const ReplayedWindow& w) { return w.identical; });
}

ReplayReport replay_ledger(std::istream& ledger) {
  Timestamp current{};
  Exchange exchange(nullptr, [&current] { return current; });
  ReplayReport report;

  std::string line;
  for (int number = 1; std::getline(ledger, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "ledger line " + std::to_string(number);
    json record;
    try {
      record = json::parse(line);
      current = Timestamp(std::chrono::milliseconds(record.at("ts").get<long long>()));
      const std::string event = record.at("event").get<std::string>();
      const json& payload = record.at("payload");
      const WindowId id(payload.at("window_id").get<std::string>());

      if (event == "window_opened") {
        std::vector<ResourcePool> pools;
        for (const auto& pool : payload.at("pools")) pools.push_back(decode_pool(pool));
        const auto opened = payload.at("opened_at").get<long long>();
        const auto closes = payload.at("closes_at").get<long long>();
        current = Timestamp(std::chrono::milliseconds(opened));
        const WindowId assigned = exchange.open_window(
            std::move(pools), decode_config(payload.at("config")),
            std::chrono::milliseconds(closes - opened));
        if (assigned != id) {
          throw Error(ErrorCode::kParse, where + ": window ids out of order (" + id.str() +
                                             " replayed as " + assigned.str() + ")");
        }
      } else if (event == "bid_submitted") {
        exchange.submit_bid(id, decode_bid(payload.at("bid")));
      } else if (event == "window_closed") {
        exchange.close_window(id);
      } else if (event == "window_finalized") {
        const AuctionOutcome outcome = exchange.finalize_window(id);
        ReplayedWindow replayed;
        replayed.window = id;
        replayed.recorded = payload.at("outcome").dump();
        replayed.replayed = canonical(outcome);
        replayed.identical = replayed.recorded == replayed.replayed;
        report.windows.push_back(std::move(replayed));
      }
      // preliminary_published records are informational.
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParse) throw;
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  return report;
}

}  // namespace clockex
