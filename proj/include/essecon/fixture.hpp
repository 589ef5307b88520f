// Copyright 2026 The essecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "essecon/core_domain.hpp"

namespace essecon {

inline constexpr std::uint64_t kFixtureSeed = 20160512;

struct FixtureOptions {
  int slots = 168;              // hourly, starting Monday 00:00
  double peak_demand = 400.0;   // kW
  double pv_peak_fraction = 0.6;
  double sale_price_ratio = 0.6;
  std::uint64_t seed = kFixtureSeed;
};

/// Synthetic summer week: a campus-like diurnal load with lighter weekends, a
/// daytime PV profile whose peak is pv_peak_fraction of the peak demand,
/// three-tier time-of-use prices, and regulation/reserve prices with hourly
/// noise. The same options always give the same series.
std::vector<SlotExogenous> generate_fixture(const FixtureOptions& options = {});

}  // namespace essecon
