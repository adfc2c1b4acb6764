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

#include "clockex/reserve.hpp"

#include <cmath>
#include <string>

#include "clockex/errors.hpp"

namespace clockex {

double weight(const ReserveCurve& curve, double utilization) {
  if (!(utilization >= 0.0 && utilization <= 1.0)) {
    throw Error(ErrorCode::kDomain,
                "utilization " + std::to_string(utilization) + " outside [0, 1]");
  }
  const double exponent =
      std::pow(utilization, curve.m) - std::pow(curve.psi_star, curve.m);
  return std::pow(curve.k, exponent);
}

double reserve_price(const ResourcePool& pool, const ReserveCurve& curve) {
  ReserveCurve effective = curve;
  if (pool.psi_star) effective.psi_star = *pool.psi_star;
  return weight(effective, pool.utilization) * pool.cost;
}

PriceVector reserve_vector(std::span<const ResourcePool> pools, const ReserveCurve& curve) {
  PriceVector out;
  for (const auto& pool : pools) {
    if (out.contains(pool.id)) {
      throw Error(ErrorCode::kDuplicatePool, "duplicate pool id " + pool.id.str());
    }
    out.set(pool.id, reserve_price(pool, curve));
  }
  return out;
}

}  // namespace clockex
