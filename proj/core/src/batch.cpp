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

#include "clockex/batch.hpp"

#include <cstdio>
#include <fstream>

#include "clockex/clock.hpp"
#include "clockex/errors.hpp"
#include "clockex/exchange.hpp"
#include "clockex/json_io.hpp"
#include "clockex/reserve.hpp"
#include "clockex/settlement.hpp"

namespace clockex {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) { open_output(path) << j.dump(2) << '\n'; }

void apply(const BatchOverrides& o, MarketConfig& config) {
  if (o.alpha) config.alpha = *o.alpha;
  if (o.delta) config.delta = *o.delta;
  if (o.increment_mode) config.increment_mode = *o.increment_mode;
  if (o.normalize_increments) config.normalize_increments = *o.normalize_increments;
  if (o.max_rounds) config.max_rounds = *o.max_rounds;
  if (o.curve_k) config.reserve_curve.k = *o.curve_k;
  if (o.curve_m) config.reserve_curve.m = *o.curve_m;
  if (o.curve_psi_star) config.reserve_curve.psi_star = *o.curve_psi_star;
}

PriceVector load_prices(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return decode_prices(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void write_trajectory(const fs::path& path, const AuctionOutcome& outcome) {
  auto out = open_output(path);
  out << "round\tpool\tprice\texcess_demand\n";
  for (const auto& point : outcome.trajectory) {
    for (std::size_t r = 0; r < outcome.pools.size(); ++r) {
      out << point.round << '\t' << outcome.pools[r].str() << '\t' << num(point.prices[r])
          << '\t' << num(point.excess_demand[r]) << '\n';
    }
  }
}

}  // namespace

BatchResult run_batch(const fs::path& market_file, const fs::path& bids_file,
                      const fs::path& output_dir, const BatchOverrides& overrides,
                      std::ostream& log) {
  BatchResult result;
  MarketDefinition def;
  std::vector<Bid> bids;
  try {
    def = load_market_definition(market_file.string());
    apply(overrides, def.config);
    validate(def.config);
    if (overrides.baseline_prices) def.baseline_prices = load_prices(*overrides.baseline_prices);
    std::ifstream in(bids_file);
    if (!in) throw Error(ErrorCode::kIo, "cannot open bids file " + bids_file.string());
    try {
      bids = read_bids(in);
    } catch (const Error& e) {
      throw Error(e.code(), bids_file.string() + ": " + e.what());
    }
  } catch (const Error& e) {
    result.exit_code = e.code() == ErrorCode::kIo ? kExitError : kExitParse;
    result.message = e.what();
    log << "error: " << e.what() << '\n';
    return result;
  }

  try {
    const Market market(def.pools);
    for (const auto& bid : bids) check_pools(bid, market);
    const PriceVector reserves = reserve_vector(market.pools(), def.config.reserve_curve);
    AuctionOutcome outcome = run_auction(market, bids, reserves, def.config);

    fs::create_directories(output_dir);
    write_json(output_dir / "outcome.json", encode(outcome));
    write_trajectory(output_dir / "trajectory.tsv", outcome);
    {
      auto out = open_output(output_dir / "reserves.tsv");
      out << "pool\tcost\tutilization\treserve\n";
      for (const auto& pool : market.pools()) {
        out << pool.id.str() << '\t' << num(pool.cost) << '\t' << num(pool.utilization) << '\t'
            << num(reserves.at(pool.id)) << '\n';
      }
    }

    const FeasibilityReport report = verify_feasibility(bids, outcome);
    write_json(output_dir / "feasibility.json", encode(report));

    std::vector<std::pair<std::string, std::string>> summary = {
        {"status", std::string(to_string(outcome.status))},
        {"rounds", std::to_string(outcome.rounds)},
        {"bidders", std::to_string(bids.size())},
        {"winners", std::to_string(outcome.winners.size())},
        {"losers", std::to_string(outcome.losers.size())},
        {"feasible", report.passed ? "true" : "false"},
    };

    if (!outcome.converged()) {
      result.exit_code = outcome.status == AuctionStatus::kRoundLimit ? kExitRoundLimit
                                                                      : kExitPriceCeiling;
      result.message = "auction stopped by guard: " + std::string(to_string(outcome.status));
    } else if (!report.passed) {
      result.exit_code = kExitInfeasible;
      result.message = "converged outcome failed verification";
    } else {
      const SettlementStats stats =
          settlement_stats(bids, outcome, market, def.baseline_prices);
      write_json(output_dir / "stats.json", encode(stats));
      {
        auto out = open_output(output_dir / "premiums.tsv");
        out << "user\tpremium\n";
        for (const auto& [user, gamma] : stats.premiums) {
          out << user.str() << '\t' << num(gamma) << '\n';
        }
      }
      {
        auto out = open_output(output_dir / "price_ratios.tsv");
        out << "pool\tbaseline\tfinal\tratio\n";
        for (const auto& [pool, ratio] : stats.price_ratios) {
          out << pool.str() << '\t' << num(def.baseline_prices.at(pool)) << '\t'
              << num(outcome.final_prices.at(pool)) << '\t' << num(ratio) << '\n';
        }
      }
      {
        auto out = open_output(output_dir / "utilization.tsv");
        out << "user\tpool\tside\tutilization\n";
        for (const auto& r : stats.utilization_records) {
          out << r.user.str() << '\t' << r.pool.str() << '\t' << to_string(r.side) << '\t'
              << num(r.utilization) << '\n';
        }
      }
      summary.emplace_back("percent_settled", num(stats.percent_settled));
      summary.emplace_back("median_premium",
                           stats.median_premium ? num(*stats.median_premium) : "NA");
      summary.emplace_back("mean_premium", stats.mean_premium ? num(*stats.mean_premium) : "NA");
      result.exit_code = kExitSettled;
      result.message = "settled";
    }

    auto out = open_output(output_dir / "summary.tsv");
    out << "key\tvalue\n";
    for (const auto& [key, value] : summary) out << key << '\t' << value << '\n';
    result.outcome = std::move(outcome);
    log << result.message << " after " << result.outcome->rounds << " rounds\n";
  } catch (const Error& e) {
    result.exit_code = e.code() == ErrorCode::kUnknownPool || e.code() == ErrorCode::kInvalidInput ||
                               e.code() == ErrorCode::kInvalidConfig
                           ? kExitParse
                           : kExitError;
    result.message = e.what();
    log << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    result.exit_code = kExitError;
    result.message = e.what();
    log << "error: " << e.what() << '\n';
  }
  return result;
}

}  // namespace clockex
