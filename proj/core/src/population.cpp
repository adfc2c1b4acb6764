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

#include "clockex/population.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "clockex/errors.hpp"

namespace clockex {

double SeededRng::uniform(double lo, double hi) {
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

int SeededRng::integer(int lo, int hi) {
  const double span = static_cast<double>(hi) - lo + 1.0;
  const int offset = static_cast<int>(std::floor(uniform(0.0, span)));
  return std::min(hi, lo + offset);
}

namespace {

std::string user_name(char prefix, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%04d", prefix, index);
  return buf;
}

// `count` distinct pool indices out of `size`, in draw order.
std::vector<std::size_t> pick_pools(SeededRng& rng, std::size_t size, int count) {
  std::vector<std::size_t> order(size);
  for (std::size_t i = 0; i < size; ++i) order[i] = i;
  for (int i = 0; i < count; ++i) {
    const int j = rng.integer(i, static_cast<int>(size) - 1);
    std::swap(order[i], order[j]);
  }
  order.resize(count);
  return order;
}

}  // namespace

void validate(const PopulationCounts& counts, const PopulationRanges& ranges) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidRange, what); };
  if (counts.buyers < 0 || counts.sellers < 0 || counts.traders < 0) {
    fail("population counts must be >= 0");
  }
  if (ranges.min_quantity < 1 || ranges.max_quantity < ranges.min_quantity) {
    fail("quantity range must satisfy 1 <= min <= max");
  }
  if (ranges.max_bundles < 1) fail("max_bundles must be >= 1");
  if (ranges.max_pools_per_bundle < 1) fail("max_pools_per_bundle must be >= 1");
  if (!(ranges.min_unit_value > 0.0) || ranges.max_unit_value < ranges.min_unit_value) {
    fail("unit value range must satisfy 0 < min <= max");
  }
  if (!(ranges.min_unit_ask > 0.0) || ranges.max_unit_ask < ranges.min_unit_ask) {
    fail("unit ask range must satisfy 0 < min <= max");
  }
}

std::vector<ResourcePool> generate_pools(std::uint64_t seed, int count) {
  if (count < 0) throw Error(ErrorCode::kInvalidRange, "pool count must be >= 0");
  static constexpr std::array<const char*, 3> kKinds = {"cpu", "ram", "disk"};
  static constexpr std::array<const char*, 3> kUnits = {"core", "GiB", "TiB"};
  SeededRng rng(seed);
  std::vector<ResourcePool> pools;
  for (int i = 0; i < count; ++i) {
    ResourcePool pool;
    const int cluster = i / 3 + 1;
    const std::size_t kind = static_cast<std::size_t>(i % 3);
    char id[32];
    std::snprintf(id, sizeof id, "c%02d/%s", cluster, kKinds[kind]);
    pool.id = PoolId(id);
    pool.cluster = "c" + std::to_string(cluster);
    pool.kind = kKinds[kind];
    pool.unit = kUnits[kind];
    pool.cost = rng.uniform(0.5, 5.0);
    pool.utilization = rng.uniform(0.0, 1.0);
    pools.push_back(std::move(pool));
  }
  return pools;
}

std::vector<Bid> generate_population(std::uint64_t seed, const Market& market,
                                     const PopulationCounts& counts,
                                     const PopulationRanges& ranges) {
  validate(counts, ranges);
  const int total = counts.buyers + counts.sellers + counts.traders;
  if (total > 0 && market.empty()) {
    throw Error(ErrorCode::kInvalidRange, "cannot generate bids over an empty market");
  }
  const auto pools = market.pools();
  const int width = std::min<int>(ranges.max_pools_per_bundle, static_cast<int>(pools.size()));
  SeededRng rng(seed);
  std::vector<Bid> bids;

  for (int b = 1; b <= counts.buyers; ++b) {
    const int alternatives = rng.integer(1, ranges.max_bundles);
    std::vector<BundleVector> bundles;
    double units = 0.0;
    for (int a = 0; a < alternatives; ++a) {
      BundleVector bundle;
      for (std::size_t index : pick_pools(rng, pools.size(), rng.integer(1, width))) {
        const int q = rng.integer(ranges.min_quantity, ranges.max_quantity);
        bundle.set(pools[index].id, q);
        units += q;
      }
      bundles.push_back(std::move(bundle));
    }
    const double value = rng.uniform(ranges.min_unit_value, ranges.max_unit_value);
    bids.emplace_back(UserId(user_name('b', b)), std::move(bundles), value * units / alternatives);
  }

  for (int s = 1; s <= counts.sellers; ++s) {
    BundleVector bundle;
    double units = 0.0;
    for (std::size_t index : pick_pools(rng, pools.size(), rng.integer(1, width))) {
      const int q = rng.integer(ranges.min_quantity, ranges.max_quantity);
      bundle.set(pools[index].id, -q);
      units += q;
    }
    const double ask = rng.uniform(ranges.min_unit_ask, ranges.max_unit_ask);
    bids.emplace_back(UserId(user_name('s', s)), std::vector<BundleVector>{std::move(bundle)},
                      -ask * units);
  }

  for (int t = 1; t <= counts.traders; ++t) {
    if (pools.size() < 2) {
      throw Error(ErrorCode::kInvalidRange, "traders need at least two pools");
    }
    const auto pair = pick_pools(rng, pools.size(), 2);
    const int buy = rng.integer(ranges.min_quantity, ranges.max_quantity);
    const int sell = rng.integer(ranges.min_quantity, ranges.max_quantity);
    BundleVector bundle;
    bundle.set(pools[pair[0]].id, buy);
    bundle.set(pools[pair[1]].id, -sell);
    const double value = rng.uniform(ranges.min_unit_value, ranges.max_unit_value);
    const double ask = rng.uniform(ranges.min_unit_ask, ranges.max_unit_ask);
    bids.emplace_back(UserId(user_name('t', t)), std::vector<BundleVector>{std::move(bundle)},
                      value * buy - ask * sell);
  }
  return bids;
}

}  // namespace clockex
