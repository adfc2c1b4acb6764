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

// Seeded synthetic markets and bidder populations. The same seed always yields
// the same pools and bids on every platform: draws come straight from
// mt19937_64 rather than the implementation-defined std distributions.

#include <cstdint>
#include <random>
#include <vector>

#include "clockex/market.hpp"

namespace clockex {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform over the integers lo..hi inclusive.
  int integer(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

struct PopulationCounts {
  int buyers = 0;
  int sellers = 0;
  int traders = 0;
};

struct PopulationRanges {
  int min_quantity = 1;  // whole units per bundle component
  int max_quantity = 5;
  int max_bundles = 3;   // XOR alternatives per buyer
  int max_pools_per_bundle = 3;
  double min_unit_value = 0.5;  // buyer willingness per unit
  double max_unit_value = 20.0;
  double min_unit_ask = 0.1;    // seller minimum revenue per unit
  double max_unit_ask = 5.0;
};

// Throws kInvalidRange for negative counts or an empty/inverted range.
void validate(const PopulationCounts& counts, const PopulationRanges& ranges);

// `count` pools named c<i>/<kind>, cycling through cpu, ram and disk, with
// costs in [0.5, 5) and utilizations in [0, 1).
std::vector<ResourcePool> generate_pools(std::uint64_t seed, int count);

// Pure buyers (b0001, ...), pure sellers (s0001, ...) and optionally traders
// (t0001, ...) over `market`'s pools.
std::vector<Bid> generate_population(std::uint64_t seed, const Market& market,
                                     const PopulationCounts& counts,
                                     const PopulationRanges& ranges = {});

}  // namespace clockex
