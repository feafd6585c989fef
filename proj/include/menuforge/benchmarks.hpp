// Copyright 2026 The Menuforge Authors
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
#include <optional>
#include <vector>

#include "menuforge/dist.hpp"

namespace menuforge {

struct MonopolyResult {
  std::optional<double> price;  // absent when no atom reaches the floor
  double revenue = 0.0;
};

// Best posted price at or above `floor` for a single item; ties go to the
// smaller price.
MonopolyResult monopoly_price(const Marginal& m, double floor);

struct BundleResult {
  double price = 0.0;
  double revenue = 0.0;
  bool exact = true;
};

struct BrevConfig {
  McConfig mc;
  std::uint64_t support_cap = kDefaultSupportCap;
  int quantile_candidates = 200;
};

// Best take-it-or-leave-it price for the grand bundle.
BundleResult brev(const ProductDistribution& d, const BrevConfig& config = {});

struct PricedRevenue {
  std::vector<double> prices;
  double revenue = 0.0;
};

// Selling separately. Additive: per-item monopoly prices. Unit demand: same as
// the exclusive (exact_small) benchmark. Other k are unsupported.
PricedRevenue srev(const ProductDistribution& d, std::uint64_t budget = kDefaultSupportCap);

enum class SrevStarMode { kUniformLower, kExactSmall };

// Selling exclusively (at most one item). kUniformLower scans one common
// price over all atoms; kExactSmall searches per-item atom grids, where a
// price of +infinity withdraws the item. The exhaustive search is limited to
// budget = grid points x joint support points.
PricedRevenue srev_star(const ProductDistribution& d, SrevStarMode mode,
                        std::uint64_t budget = kDefaultSupportCap);

// Revenue of selling item i at prices[i] (infinite = not offered), buyer
// takes at most one item.
double exclusive_revenue(const ProductDistribution& d, const std::vector<double>& prices,
                         std::uint64_t cap = kDefaultSupportCap);

struct BenchmarkReport {
  std::optional<PricedRevenue> srev;
  BundleResult brev;
  PricedRevenue srev_star_lower;
  std::optional<PricedRevenue> srev_star_exact;
  std::vector<MonopolyResult> per_item_monopoly;
};

BenchmarkReport benchmark_report(const ProductDistribution& d, const BrevConfig& config = {},
                                 std::uint64_t search_budget = kDefaultSupportCap);

}  // namespace menuforge
