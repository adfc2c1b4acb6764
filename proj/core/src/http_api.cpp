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

#include "clockex/http_api.hpp"

#include <httplib.h>

#include <cstdio>
#include <exception>

#include "clockex/json_io.hpp"
#include "clockex/reserve.hpp"
#include "clockex/settlement.hpp"

namespace clockex {

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  reply(res, http_status(code), {{"error", std::string(to_string(code))}, {"message", message}});
}

// Runs `fn`, turning exceptions into JSON error responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    reply_error(res, e.code(), e.what());
  } catch (const json::exception& e) {
    reply_error(res, ErrorCode::kParse, e.what());
  } catch (const std::exception& e) {
    reply(res, 500, {{"error", "internal"}, {"message", e.what()}});
  }
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("request body: ") + e.what());
  }
}

WindowId window_param(const httplib::Request& req) {
  return WindowId(req.matches[1].str());
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidInput:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidRange:
    case ErrorCode::kDomain:
      return 400;
    case ErrorCode::kUnauthorized: return 401;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kWindowClosed:
    case ErrorCode::kWrongState:
      return 409;
    case ErrorCode::kInvalidBid:
    case ErrorCode::kBudgetExceeded:
    case ErrorCode::kUnknownPool:
    case ErrorCode::kDuplicatePool:
    case ErrorCode::kUnknownService:
    case ErrorCode::kMismatch:
      return 422;
    default:
      return 500;
  }
}

ExchangeApi::ExchangeApi(std::shared_ptr<Exchange> exchange, MarketDefinition definition,
                         std::string operator_token)
    : exchange_(std::move(exchange)),
      definition_(std::move(definition)),
      token_(std::move(operator_token)) {}

void ExchangeApi::mount(httplib::Server& server) {
  auto authorized = [this](const httplib::Request& req) {
    if (token_.empty()) return;
    const std::string header = req.get_header_value("Authorization");
    if (header != "Bearer " + token_) {
      throw Error(ErrorCode::kUnauthorized, "operator token required");
    }
  };

  server.Get("/pools", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      json pools = json::array();
      for (const auto& pool : definition_.pools) {
        json entry = encode(pool);
        entry["reserve_price"] = reserve_price(pool, definition_.config.reserve_curve);
        pools.push_back(std::move(entry));
      }
      reply(res, 200, {{"pools", std::move(pools)}});
    });
  });

  server.Get("/windows", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      json list = json::array();
      for (const auto& id : exchange_->windows()) {
        const AuctionWindow w = exchange_->window(id);
        list.push_back({{"window_id", id.str()},
                        {"state", std::string(to_string(w.state))},
                        {"opened_at", w.opened_at.time_since_epoch().count()},
                        {"closes_at", w.closes_at.time_since_epoch().count()}});
      }
      reply(res, 200, {{"windows", std::move(list)}});
    });
  });

  server.Post("/windows", [this, authorized](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      authorized(req);
      const WindowId id = exchange_->open_window(definition_.pools, definition_.config,
                                                 definition_.window_duration);
      reply(res, 201, {{"window_id", id.str()}});
    });
  });

  server.Get(R"(/windows/([^/]+)/summary)",
             [this](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 reply(res, 200, encode(exchange_->market_summary(window_param(req))));
               });
             });

  server.Post(R"(/windows/([^/]+)/bids)",
              [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  Bid bid = decode_bid(parse_body(req));
                  reply(res, 201, encode(exchange_->submit_bid(window_param(req), std::move(bid))));
                });
              });

  server.Post(R"(/windows/([^/]+)/translate)",
              [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  const json body = parse_body(req);
                  const AuctionWindow w = exchange_->window(window_param(req));
                  std::map<std::string, double> request;
                  const json& services = body.at("services");
                  if (!services.is_object()) {
                    throw Error(ErrorCode::kParse, "field 'services' must be an object");
                  }
                  for (const auto& [service, units] : services.items()) {
                    if (!units.is_number()) {
                      throw Error(ErrorCode::kParse, "units for " + service + " must be a number");
                    }
                    request[service] = units.get<double>();
                  }
                  const std::string cluster = body.at("cluster").get<std::string>();
                  const BundleVector bundle =
                      translate_requirements(request, definition_.translations, w.market, cluster);
                  const MarketSummary summary = exchange_->market_summary(w.id);
                  json prices = json::object();
                  for (const auto& row : summary.pools) {
                    if (bundle.entries().contains(row.pool)) prices[row.pool.str()] = row.price;
                  }
                  reply(res, 200, {{"bundle", encode(bundle)}, {"prices", std::move(prices)}});
                });
              });

  server.Get(R"(/windows/([^/]+)/preliminary)",
             [this](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 const AuctionWindow w = exchange_->window(window_param(req));
                 if (!w.preliminary) {
                   throw Error(ErrorCode::kNotFound, "no preliminary run yet for " + w.id.str());
                 }
                 reply(res, 200, encode(*w.preliminary));
               });
             });

  server.Post(R"(/windows/([^/]+)/preliminary)",
              [this, authorized](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  authorized(req);
                  reply(res, 200, encode(exchange_->run_preliminary(window_param(req))));
                });
              });

  server.Post(R"(/windows/([^/]+)/close)",
              [this, authorized](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  authorized(req);
                  exchange_->close_window(window_param(req));
                  reply(res, 200, {{"window_id", req.matches[1].str()}, {"state", "closed"}});
                });
              });

  server.Post(R"(/windows/([^/]+)/finalize)",
              [this, authorized](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  authorized(req);
                  reply(res, 200, encode(exchange_->finalize_window(window_param(req))));
                });
              });

  server.Get(R"(/windows/([^/]+)/settlement)",
             [this](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 const AuctionWindow w = exchange_->window(window_param(req));
                 if (!w.final) {
                   throw Error(ErrorCode::kWrongState, "window " + w.id.str() + " is not settled");
                 }
                 std::vector<Bid> bids;
                 for (const auto& entry : w.bids) bids.push_back(entry.second);
                 json body = {{"window_id", w.id.str()}, {"outcome", encode(*w.final)}};
                 body["feasibility"] = encode(verify_feasibility(bids, *w.final));
                 try {
                   body["stats"] = encode(
                       settlement_stats(bids, *w.final, w.market, definition_.baseline_prices));
                 } catch (const Error& e) {
                   body["stats"] = nullptr;
                   body["stats_error"] = e.what();
                 }
                 reply(res, 200, body);
               });
             });
}

TickLoop::TickLoop(std::shared_ptr<Exchange> exchange, std::chrono::milliseconds period)
    : exchange_(std::move(exchange)), period_(period) {
  worker_ = std::thread([this] {
    std::unique_lock lock(mu_);
    while (!cv_.wait_for(lock, period_, [this] { return stop_; })) {
      lock.unlock();
      try {
        exchange_->tick();
      } catch (const std::exception& e) {
        std::fprintf(stderr, "tick failed: %s\n", e.what());
      }
      lock.lock();
    }
  });
}

TickLoop::~TickLoop() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

}  // namespace clockex
