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

// HTTP front end of the exchange (JSON bodies):
//
//   GET  /pools                      pools with cost, utilization, reserve
//   GET  /windows                    window ids and states
//   POST /windows                    open a window from the market definition*
//   GET  /windows/{id}/summary       market summary
//   POST /windows/{id}/bids          submit or replace a bid
//   POST /windows/{id}/translate     service units -> covering bundle + prices
//   GET  /windows/{id}/preliminary   latest preliminary outcome
//   POST /windows/{id}/preliminary   run a preliminary simulation now*
//   POST /windows/{id}/close         open -> closed*
//   POST /windows/{id}/finalize      closed -> settled*
//   GET  /windows/{id}/settlement    final outcome, feasibility and stats
//
// (*) operator routes; they need "Authorization: Bearer <token>".
// Errors are {"error": <kebab-case code>, "message": ...}.

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "clockex/errors.hpp"
#include "clockex/exchange.hpp"

namespace httplib {
class Server;
}

namespace clockex {

int http_status(ErrorCode code);

class ExchangeApi {
 public:
  ExchangeApi(std::shared_ptr<Exchange> exchange, MarketDefinition definition,
              std::string operator_token);

  // Registers every route on `server`.
  void mount(httplib::Server& server);

  const MarketDefinition& definition() const { return definition_; }

 private:
  std::shared_ptr<Exchange> exchange_;
  MarketDefinition definition_;
  std::string token_;
};

// Calls Exchange::tick() every `period` on a background thread until
// destroyed.
class TickLoop {
 public:
  TickLoop(std::shared_ptr<Exchange> exchange, std::chrono::milliseconds period);
  ~TickLoop();

  TickLoop(const TickLoop&) = delete;
  TickLoop& operator=(const TickLoop&) = delete;

 private:
  std::shared_ptr<Exchange> exchange_;
  std::chrono::milliseconds period_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stop_ = false;
  std::thread worker_;
};

}  // namespace clockex
