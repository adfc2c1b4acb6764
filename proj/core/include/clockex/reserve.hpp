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

// Utilization-weighted reserve prices. A pool's reserve is its unit cost
// scaled by a congestion weight that is 1 at the break-even utilization,
// rises steeply for congested pools, and spans exactly a factor k between an
// idle and a saturated pool.

#include <span>

#include "clockex/market.hpp"

namespace clockex {

// phi(psi) = k^(psi^m - psi_star^m). Throws kDomain unless 0 <= psi <= 1.
double weight(const ReserveCurve& curve, double utilization);

// cost * phi(utilization), honouring a per-pool psi_star override.
double reserve_price(const ResourcePool& pool, const ReserveCurve& curve);

// Throws kDuplicatePool when two pools share an id.
PriceVector reserve_vector(std::span<const ResourcePool> pools, const ReserveCurve& curve);

}  // namespace clockex
