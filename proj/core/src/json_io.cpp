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

#include "clockex/json_io.hpp"

#include <fstream>
#include <sstream>

#include "clockex/errors.hpp"

namespace clockex {

namespace {

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParse, where.empty() ? what : where + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) parse_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_error(where, std::string("missing field '") + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_error(where, "expected a number");
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) parse_error(where, "expected a string");
  return j.get<std::string>();
}

std::string field_path(const std::string& where, const char* key) {
  return where.empty() ? std::string("field '") + key + "'"
                       : where + " field '" + key + "'";
}

double number_field(const json& j, const char* key, const std::string& where) {
  return as_number(require(j, key, where), field_path(where, key));
}

std::string string_field(const json& j, const char* key, const std::string& where) {
  return as_string(require(j, key, where), field_path(where, key));
}

template <typename T, typename Fn>
void optional_field(const json& j, const char* key, const std::string& where, T& out, Fn convert) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  out = convert(*it, field_path(where, key));
}

PriceVector decode_prices_at(const json& j, const std::string& where) {
  if (!j.is_object()) parse_error(where, "expected an object of pool -> price");
  PriceVector out;
  for (const auto& [pool, price] : j.items()) {
    const double value = as_number(price, where + " pool '" + pool + "'");
    try {
      out.set(PoolId(pool), value);
    } catch (const Error& e) {
      parse_error(where, e.what());
    }
  }
  return out;
}

BundleVector decode_bundle_at(const json& j, const std::string& where) {
  if (!j.is_object()) parse_error(where, "expected an object of pool -> quantity");
  BundleVector out;
  for (const auto& [pool, quantity] : j.items()) {
    out.set(PoolId(pool), as_number(quantity, where + " pool '" + pool + "'"));
  }
  return out;
}

ResourcePool decode_pool_at(const json& j, const std::string& where) {
  ResourcePool pool;
  pool.id = PoolId(string_field(j, "id", where));
  const std::string here = where.empty() ? "pool '" + pool.id.str() + "'" : where;
  pool.cluster = string_field(j, "cluster", here);
  pool.kind = string_field(j, "kind", here);
  if (auto it = j.find("unit"); it != j.end()) pool.unit = as_string(*it, field_path(here, "unit"));
  pool.cost = number_field(j, "cost", here);
  pool.utilization = number_field(j, "utilization", here);
  optional_field(j, "psi_star", here, pool.psi_star,
                 [](const json& v, const std::string& w) { return as_number(v, w); });
  try {
    validate(pool);
  } catch (const Error& e) {
    parse_error(here, e.what());
  }
  return pool;
}

Bid decode_bid_at(const json& j, const std::string& where) {
  const std::string user = string_field(j, "user_id", where);
  const json& bundles = require(j, "bundles", where);
  if (!bundles.is_array()) parse_error(field_path(where, "bundles"), "expected an array");
  std::vector<BundleVector> list;
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    list.push_back(decode_bundle_at(bundles[i], field_path(where, "bundles") + "[" +
                                                    std::to_string(i) + "]"));
  }
  const double willingness = number_field(j, "willingness", where);
  std::optional<double> budget;
  optional_field(j, "budget", where, budget,
                 [](const json& v, const std::string& w) { return as_number(v, w); });
  return Bid(UserId(user), std::move(list), willingness, budget);
}

}  // namespace

json encode(const ResourcePool& pool) {
  json j = {{"id", pool.id.str()},     {"cluster", pool.cluster},
            {"kind", pool.kind},       {"unit", pool.unit},
            {"cost", pool.cost},       {"utilization", pool.utilization}};
  if (pool.psi_star) j["psi_star"] = *pool.psi_star;
  return j;
}

json encode(const BundleVector& bundle) {
  json j = json::object();
  for (const auto& [pool, quantity] : bundle.entries()) j[pool.str()] = quantity;
  return j;
}

json encode(const Bid& bid) {
  json bundles = json::array();
  for (const auto& bundle : bid.bundles()) bundles.push_back(encode(bundle));
  json j = {{"user_id", bid.user().str()},
            {"bundles", std::move(bundles)},
            {"willingness", bid.willingness()}};
  if (bid.budget()) j["budget"] = *bid.budget();
  return j;
}

json encode(const PriceVector& prices) {
  json j = json::object();
  for (const auto& [pool, price] : prices.entries()) j[pool.str()] = price;
  return j;
}

json encode(const ReserveCurve& curve) {
  return {{"k", curve.k}, {"m", curve.m}, {"psi_star", curve.psi_star}};
}

json encode(const MarketConfig& config) {
  json j = {{"alpha", config.alpha},
            {"delta", config.delta},
            {"increment_mode", std::string(to_string(config.increment_mode))},
            {"normalize_increments", config.normalize_increments},
            {"max_rounds", config.max_rounds},
            {"reserve_curve", encode(config.reserve_curve)}};
  j["price_ceiling"] = config.price_ceiling ? encode(*config.price_ceiling) : json(nullptr);
  return j;
}

json encode(const AuctionOutcome& outcome) {
  json allocations = json::object();
  for (const auto& [user, bundle] : outcome.allocations) allocations[user.str()] = encode(bundle);
  json winners = json::array();
  for (const auto& user : outcome.winners) winners.push_back(user.str());
  json losers = json::array();
  for (const auto& user : outcome.losers) losers.push_back(user.str());
  json pools = json::array();
  for (const auto& pool : outcome.pools) pools.push_back(pool.str());
  json trajectory = json::array();
  for (const auto& point : outcome.trajectory) {
    trajectory.push_back(
        {{"round", point.round}, {"prices", point.prices}, {"excess_demand", point.excess_demand}});
  }
  return {{"status", std::string(to_string(outcome.status))},
          {"rounds", outcome.rounds},
          {"final_prices", encode(outcome.final_prices)},
          {"allocations", std::move(allocations)},
          {"winners", std::move(winners)},
          {"losers", std::move(losers)},
          {"pools", std::move(pools)},
          {"trajectory", std::move(trajectory)}};
}

json encode(const FeasibilityReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"constraint", v.constraint}, {"subject", v.subject}, {"detail", v.detail}});
  }
  return {{"passed", report.passed}, {"violations", std::move(violations)}};
}

json encode(const SettlementStats& stats) {
  json premiums = json::object();
  for (const auto& [user, gamma] : stats.premiums) premiums[user.str()] = gamma;
  json undefined = json::array();
  for (const auto& user : stats.undefined_premiums) undefined.push_back(user.str());
  json records = json::array();
  for (const auto& r : stats.utilization_records) {
    records.push_back({{"user_id", r.user.str()},
                       {"pool", r.pool.str()},
                       {"side", std::string(to_string(r.side))},
                       {"utilization", r.utilization}});
  }
  json ratios = json::object();
  for (const auto& [pool, ratio] : stats.price_ratios) ratios[pool.str()] = ratio;
  return {{"premiums", std::move(premiums)},
          {"undefined_premiums", std::move(undefined)},
          {"median_premium", stats.median_premium ? json(*stats.median_premium) : json(nullptr)},
          {"mean_premium", stats.mean_premium ? json(*stats.mean_premium) : json(nullptr)},
          {"percent_settled", stats.percent_settled},
          {"utilization_records", std::move(records)},
          {"price_ratios", std::move(ratios)}};
}

json encode(const MarketSummary& summary) {
  json pools = json::array();
  for (const auto& row : summary.pools) {
    pools.push_back({{"pool", row.pool.str()},
                     {"cluster", row.cluster},
                     {"kind", row.kind},
                     {"unit", row.unit},
                     {"price", row.price},
                     {"reserve", row.reserve},
                     {"bids", row.bids},
                     {"offers", row.offers},
                     {"utilization", row.utilization}});
  }
  return {{"window_id", summary.window.str()},
          {"state", std::string(to_string(summary.state))},
          {"closes_at", summary.closes_at.time_since_epoch().count()},
          {"prices_final", summary.prices_final},
          {"status", summary.status ? json(std::string(to_string(*summary.status))) : json(nullptr)},
          {"pools", std::move(pools)}};
}

json encode(const RequirementTranslation& table) {
  return {{"service", table.service}, {"coefficients", table.coefficients}};
}

json encode(const BidAck& ack) {
  return {{"window_id", ack.window.str()},
          {"user_id", ack.user.str()},
          {"sequence", ack.sequence},
          {"replaced", ack.replaced}};
}

ResourcePool decode_pool(const json& j) { return decode_pool_at(j, ""); }

BundleVector decode_bundle(const json& j) { return decode_bundle_at(j, "bundle"); }

Bid decode_bid(const json& j) { return decode_bid_at(j, ""); }

PriceVector decode_prices(const json& j) { return decode_prices_at(j, "prices"); }

MarketConfig decode_config(const json& j) {
  const std::string where = "config";
  if (!j.is_object()) parse_error(where, "expected an object");
  MarketConfig config;
  auto number = [](const json& v, const std::string& w) { return as_number(v, w); };
  optional_field(j, "alpha", where, config.alpha, number);
  optional_field(j, "delta", where, config.delta, number);
  optional_field(j, "increment_mode", where, config.increment_mode,
                 [](const json& v, const std::string& w) {
                   auto mode = parse_increment_mode(as_string(v, w));
                   if (!mode) parse_error(w, "expected fractional-cap or absolute-cap");
                   return *mode;
                 });
  optional_field(j, "normalize_increments", where, config.normalize_increments,
                 [](const json& v, const std::string& w) {
                   if (!v.is_boolean()) parse_error(w, "expected a boolean");
                   return v.get<bool>();
                 });
  optional_field(j, "max_rounds", where, config.max_rounds,
                 [](const json& v, const std::string& w) {
                   if (!v.is_number_integer()) parse_error(w, "expected an integer");
                   return v.get<int>();
                 });
  optional_field(j, "price_ceiling", where, config.price_ceiling,
                 [](const json& v, const std::string& w) {
                   return std::optional<PriceVector>(decode_prices_at(v, w));
                 });
  if (auto it = j.find("reserve_curve"); it != j.end()) {
    const std::string here = field_path(where, "reserve_curve");
    if (!it->is_object()) parse_error(here, "expected an object");
    optional_field(*it, "k", here, config.reserve_curve.k, number);
    optional_field(*it, "m", here, config.reserve_curve.m, number);
    optional_field(*it, "psi_star", here, config.reserve_curve.psi_star, number);
  }
  try {
    validate(config);
  } catch (const Error& e) {
    parse_error(where, e.what());
  }
  return config;
}

RequirementTranslation decode_translation(const json& j) {
  RequirementTranslation table;
  table.service = string_field(j, "service", "translation");
  const std::string where = "translation '" + table.service + "'";
  const json& coefficients = require(j, "coefficients", where);
  if (!coefficients.is_object()) parse_error(where, "coefficients must be an object");
  for (const auto& [kind, value] : coefficients.items()) {
    table.coefficients[kind] = as_number(value, where + " kind '" + kind + "'");
  }
  try {
    validate(table);
  } catch (const Error& e) {
    parse_error(where, e.what());
  }
  return table;
}

MarketDefinition decode_market_definition(const json& j) {
  if (!j.is_object()) parse_error("market", "expected an object");
  MarketDefinition def;
  const json& pools = require(j, "pools", "market");
  if (!pools.is_array()) parse_error("market field 'pools'", "expected an array");
  for (std::size_t i = 0; i < pools.size(); ++i) {
    def.pools.push_back(decode_pool_at(pools[i], ""));
  }
  if (auto it = j.find("config"); it != j.end()) def.config = decode_config(*it);
  if (auto it = j.find("baseline_prices"); it != j.end()) {
    def.baseline_prices = decode_prices_at(*it, "market field 'baseline_prices'");
  }
  if (auto it = j.find("translations"); it != j.end()) {
    if (!it->is_array()) parse_error("market field 'translations'", "expected an array");
    for (const auto& table : *it) def.translations.push_back(decode_translation(table));
  }
  auto seconds = [](const json& v, const std::string& w) {
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      parse_error(w, "expected a positive integer");
    }
    return std::chrono::seconds(v.get<long long>());
  };
  optional_field(j, "preliminary_cadence_seconds", "market", def.preliminary_cadence, seconds);
  optional_field(j, "window_duration_seconds", "market", def.window_duration, seconds);
  return def;
}

std::string canonical(const AuctionOutcome& outcome) { return encode(outcome).dump(); }

std::vector<Bid> read_bids(std::istream& in) {
  std::vector<Bid> bids;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(number);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_error(where, e.what());
    }
    try {
      bids.push_back(decode_bid_at(j, where));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParse) throw;
      parse_error(where, e.what());
    }
  }
  return bids;
}

void write_bids(std::ostream& out, const std::vector<Bid>& bids) {
  for (const auto& bid : bids) out << encode(bid).dump() << '\n';
}

MarketDefinition load_market_definition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open market file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    parse_error(path, e.what());
  }
  try {
    return decode_market_definition(j);
  } catch (const Error& e) {
    parse_error(path, e.what());
  }
}

}  // namespace clockex
