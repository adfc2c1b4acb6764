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

// clockex: batch auctions, synthetic populations, the exchange server and
// ledger replay.

#include <httplib.h>

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>

#include "clockex/batch.hpp"
#include "clockex/errors.hpp"
#include "clockex/exchange.hpp"
#include "clockex/http_api.hpp"
#include "clockex/json_io.hpp"
#include "clockex/ledger.hpp"
#include "clockex/population.hpp"

namespace {

httplib::Server* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

int serve(const std::string& market_path, const std::string& ledger_path,
          const std::string& host, int port, const std::string& token, bool open_initial) {
  using namespace clockex;
  MarketDefinition def = load_market_definition(market_path);
  std::shared_ptr<Ledger> ledger;
  if (!ledger_path.empty()) ledger = std::make_shared<Ledger>(ledger_path);
  auto exchange = std::make_shared<Exchange>(ledger);
  if (open_initial) {
    const WindowId id = exchange->open_window(def.pools, def.config, def.window_duration);
    std::cerr << "opened window " << id.str() << '\n';
  }
  const auto cadence = def.preliminary_cadence;
  ExchangeApi api(exchange, std::move(def), token);

  httplib::Server server;
  api.mount(server);
  TickLoop ticks(exchange, cadence);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "listening on " << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace clockex;
  CLI::App app{"Clock-auction exchange for cluster resource quotas"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run one auction from a market file and a bids file");
  std::string market_file, bids_file, out_dir = "out";
  BatchOverrides overrides;
  std::string increment_mode, baseline;
  bool normalize = false;
  std::uint64_t run_seed = 0;
  run->add_option("--market", market_file, "Market definition (JSON)")->required();
  run->add_option("--bids", bids_file, "Bids, one JSON record per line")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--alpha", overrides.alpha, "Increment scale");
  run->add_option("--delta", overrides.delta, "Increment cap");
  run->add_option("--increment-mode", increment_mode, "fractional-cap or absolute-cap")
      ->check(CLI::IsMember({"fractional-cap", "absolute-cap"}));
  run->add_flag("--normalize-increments", normalize, "Scale alpha by relative reserve price");
  run->add_option("--max-rounds", overrides.max_rounds, "Round limit");
  run->add_option("--curve-k", overrides.curve_k, "Reserve curve k");
  run->add_option("--curve-m", overrides.curve_m, "Reserve curve m");
  run->add_option("--curve-psi-star", overrides.curve_psi_star, "Reserve curve break-even");
  run->add_option("--baseline-prices", baseline, "JSON pool -> former fixed price");
  run->add_option("--seed", run_seed, "Accepted for symmetry with generate; runs are deterministic");

  // generate-market
  auto* gen_market = app.add_subcommand("generate-market", "Write a seeded synthetic market file");
  std::uint64_t market_seed = 1;
  int pool_count = 6;
  std::string market_out = "market.json";
  gen_market->add_option("--seed", market_seed, "Random seed");
  gen_market->add_option("--pools", pool_count, "Number of pools");
  gen_market->add_option("--out", market_out, "Output file");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a seeded synthetic bids file");
  std::uint64_t seed = 1;
  PopulationCounts counts;
  PopulationRanges ranges;
  std::string gen_market_file, gen_out = "bids.jsonl";
  gen->add_option("--market", gen_market_file, "Market definition (JSON)")->required();
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--buyers", counts.buyers, "Pure buyers");
  gen->add_option("--sellers", counts.sellers, "Pure sellers");
  gen->add_option("--traders", counts.traders, "Traders");
  gen->add_option("--min-quantity", ranges.min_quantity);
  gen->add_option("--max-quantity", ranges.max_quantity);
  gen->add_option("--max-bundles", ranges.max_bundles);
  gen->add_option("--max-pools-per-bundle", ranges.max_pools_per_bundle);
  gen->add_option("--min-unit-value", ranges.min_unit_value);
  gen->add_option("--max-unit-value", ranges.max_unit_value);
  gen->add_option("--min-unit-ask", ranges.min_unit_ask);
  gen->add_option("--max-unit-ask", ranges.max_unit_ask);
  gen->add_option("--out", gen_out, "Output file");

  // serve
  auto* srv = app.add_subcommand("serve", "Run the exchange HTTP service");
  std::string srv_market, ledger_path, host = "127.0.0.1", token;
  int port = 8080;
  bool no_window = false;
  srv->add_option("--market", srv_market, "Market definition (JSON)")->required();
  srv->add_option("--ledger", ledger_path, "Append-only event ledger");
  srv->add_option("--host", host);
  srv->add_option("--port", port);
  srv->add_option("--token", token, "Operator token for lifecycle routes");
  srv->add_flag("--no-window", no_window, "Do not open a window at startup");

  // replay
  auto* rep = app.add_subcommand("replay", "Replay a ledger and compare settlements");
  std::string replay_path;
  rep->add_option("--ledger", replay_path, "Ledger file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (!increment_mode.empty()) overrides.increment_mode = parse_increment_mode(increment_mode);
      if (normalize) overrides.normalize_increments = true;
      if (!baseline.empty()) overrides.baseline_prices = baseline;
      return run_batch(market_file, bids_file, out_dir, overrides, std::cerr).exit_code;
    }
    if (*gen_market) {
      MarketDefinition def;
      def.pools = generate_pools(market_seed, pool_count);
      json pools = json::array();
      for (const auto& pool : def.pools) pools.push_back(encode(pool));
      std::ofstream out(market_out);
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + market_out);
      out << json{{"pools", pools}, {"config", encode(def.config)}}.dump(2) << '\n';
      return 0;
    }
    if (*gen) {
      const MarketDefinition def = load_market_definition(gen_market_file);
      const auto bids = generate_population(seed, Market(def.pools), counts, ranges);
      std::ofstream out(gen_out, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + gen_out);
      write_bids(out, bids);
      return 0;
    }
    if (*srv) return serve(srv_market, ledger_path, host, port, token, !no_window);
    if (*rep) {
      std::ifstream in(replay_path);
      if (!in) throw Error(ErrorCode::kIo, "cannot open " + replay_path);
      const ReplayReport report = replay_ledger(in);
      for (const auto& w : report.windows) {
        std::cout << w.window.str() << '\t' << (w.identical ? "identical" : "DIFFERENT") << '\n';
      }
      return report.all_identical() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return e.code() == ErrorCode::kParse || e.code() == ErrorCode::kInvalidRange ? 2 : 1;
  }
  return 0;
}
