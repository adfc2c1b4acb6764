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

// Whole-auction batch runs from files, as used by `clockex run`.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "clockex/market.hpp"

namespace clockex {

// Process exit codes of a batch run.
enum BatchExit : int {
  kExitSettled = 0,      // converged and feasible
  kExitError = 1,        // I/O or other failure
  kExitParse = 2,        // malformed market or bids file
  kExitRoundLimit = 3,
  kExitPriceCeiling = 4,
  kExitInfeasible = 5,
};

// Command-line overrides of the market file's configuration.
struct BatchOverrides {
  std::optional<double> alpha;
  std::optional<double> delta;
  std::optional<IncrementMode> increment_mode;
  std::optional<bool> normalize_increments;
  std::optional<int> max_rounds;
  std::optional<double> curve_k;
  std::optional<double> curve_m;
  std::optional<double> curve_psi_star;
  std::optional<std::filesystem::path> baseline_prices;  // JSON pool -> price
};

struct BatchResult {
  int exit_code = kExitError;
  std::optional<AuctionOutcome> outcome;
  std::string message;
};

// Reads the market and bids files, computes reserve prices, runs the auction
// and writes into `output_dir`:
//
//   outcome.json        full outcome record
//   feasibility.json    constraint check report
//   stats.json          settlement statistics (settled runs only)
//   reserves.tsv        pool, cost, utilization, reserve
//   trajectory.tsv      round, pool, price, excess_demand
//   premiums.tsv        user, premium
//   price_ratios.tsv    pool, baseline, final, ratio
//   utilization.tsv     user, pool, side, utilization
//   summary.tsv         key, value
//
// Never throws; failures are reported through the exit code and `log`.
BatchResult run_batch(const std::filesystem::path& market_file,
                      const std::filesystem::path& bids_file,
                      const std::filesystem::path& output_dir, const BatchOverrides& overrides,
                      std::ostream& log);

}  // namespace clockex
