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

#include "essecon/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace essecon {

namespace {

double round_to(double v, double step) {
  const double inv = std::round(1.0 / step);
  return std::round(v * inv) / inv;
}

double tou_price(int hour, bool weekend) {
  if (weekend) return 0.09;
  if (hour >= 12 && hour < 18) return 0.25;
  if ((hour >= 8 && hour < 12) || (hour >= 18 && hour < 22)) return 0.13;
  return 0.09;
}

}  // namespace

std::vector<SlotExogenous> generate_fixture(const FixtureOptions& o) {
  if (o.slots <= 0 || o.peak_demand <= 0.0 || o.pv_peak_fraction < 0.0)
    throw std::invalid_argument("generate_fixture: invalid options");
  std::mt19937_64 rng(o.seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const int days = (o.slots + 23) / 24;
  std::vector<double> cloud(days);
  for (auto& c : cloud) c = uniform(0.55, 1.0);

  std::vector<double> demand(o.slots), pv(o.slots);
  std::vector<SlotExogenous> out(o.slots);
  int up = 1;
  for (int t = 0; t < o.slots; ++t) {
    const int day = t / 24;
    const int hour = t % 24;
    const bool weekend = day % 7 >= 5;
    const double hc = hour + 0.5;

    const double bump = std::exp(-std::pow((hc - 14.0) / 4.5, 2));
    demand[t] = (0.45 + 0.55 * bump) * (weekend ? 0.65 : 1.0) * (1.0 + uniform(-0.04, 0.04));

    double sun = 0.0;
    if (hc > 5.5 && hc < 21.5) sun = std::pow(std::sin(std::numbers::pi * (hc - 5.5) / 16.0), 1.5);
    pv[t] = sun * cloud[day] * uniform(0.85, 1.0);

    auto& x = out[t];
    x.price_purchase = tou_price(hour, weekend);
    x.price_sale = round_to(o.sale_price_ratio * x.price_purchase, 1e-6);
    const double evening = std::exp(-std::pow((hc - 18.0) / 3.0, 2));
    x.price_rmccp = round_to(0.016 + 0.014 * evening + uniform(0.0, 0.008), 1e-6);
    x.price_rmpcp = round_to(0.001 + uniform(0.0, 0.003), 1e-6);
    x.perf_score = round_to(0.85 + uniform(0.0, 0.12), 1e-4);
    x.mileage_ratio = round_to(uniform(1.0, 3.5), 1e-4);
    if (uniform(0.0, 1.0) < 0.35) up = 1 - up;
    x.reg_up_flag = up;
    x.price_reserve = round_to(0.004 + 0.006 * bump + uniform(0.0, 0.003), 1e-6);
  }

  const double dmax = *std::max_element(demand.begin(), demand.end());
  const double pmax = *std::max_element(pv.begin(), pv.end());
  for (int t = 0; t < o.slots; ++t) {
    out[t].demand = round_to(demand[t] * o.peak_demand / dmax, 1e-3);
    out[t].renewable =
        pmax > 0.0 ? round_to(pv[t] * o.pv_peak_fraction * o.peak_demand / pmax, 1e-3) : 0.0;
  }
  return out;
}

}  // namespace essecon
