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

#include "clockex/proxy.hpp"

namespace clockex {

ProxyResponse evaluate_proxy(const Bid& bid, const PriceVector& prices) {
  const auto& bundles = bid.bundles();
  std::size_t best = 0;
  double best_cost = bundle_cost(bundles[0], prices);
  for (std::size_t i = 1; i < bundles.size(); ++i) {
    const double cost = bundle_cost(bundles[i], prices);
    if (cost < best_cost) {
      best = i;
      best_cost = cost;
    }
  }
  if (best_cost <= bid.willingness()) {
    return ProxyResponse{bundles[best], best, true};
  }
  return ProxyResponse{};
}

}  // namespace clockex
