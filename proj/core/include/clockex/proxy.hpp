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

#include <cstddef>
#include <optional>

#include "clockex/market.hpp"

namespace clockex {

// What a bidder's proxy demands at the current clock prices.
struct ProxyResponse {
  BundleVector demand;                       // zero when inactive
  std::optional<std::size_t> chosen_index;  // into Bid::bundles()
  bool active = false;

  friend bool operator==(const ProxyResponse&, const ProxyResponse&) = default;
};

// Picks the cheapest bundle at `prices` (lowest index on ties) and demands it
// if its cost is at most the bid's willingness; otherwise demands nothing.
// The same rule covers sellers: with willingness -w, a bundle is taken when
// its revenue is at least w. Throws kUnknownPool for an unpriced pool.
ProxyResponse evaluate_proxy(const Bid& bid, const PriceVector& prices);

}  // namespace clockex
