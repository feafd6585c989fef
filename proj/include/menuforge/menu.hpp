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
#include "menuforge/numeric.hpp"

namespace menuforge {

// A partition of the items into blocks; the group permutes items freely
// inside each block.
class ItemGroup {
 public:
  ItemGroup() = default;
  // Validates that the blocks cover [n] exactly once. Blocks are kept in the
  // given order with their items sorted.
  ItemGroup(int n, std::vector<std::vector<int>> blocks);

  static ItemGroup trivial(int n);
  static ItemGroup full(int n);

  int n() const { return static_cast<int>(block_of_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int block_of(int item) const { return block_of_[item]; }
  bool is_trivial() const { return static_cast<int>(blocks_.size()) == n(); }
  // Same partition, regardless of block order.
  bool same_partition(const ItemGroup& o) const;
  bool operator==(const ItemGroup& o) const = default;

 private:
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

struct MenuOption {
  std::vector<double> x;  // marginal allocation probabilities, sum <= k
  double price = 0.0;
  bool operator==(const MenuOption& o) const = default;
};

// Denotes the orbit closure of its options under the group.
struct SymmetricComponent {
  ItemGroup group;
  std::vector<MenuOption> options;
  bool operator==(const SymmetricComponent& o) const = default;
};

// The null option (x = 0, price 0) is always implicitly available.
struct SymmetricMenu {
  int n = 0;
  std::vector<SymmetricComponent> components;

  std::size_t option_count() const;
  bool operator==(const SymmetricMenu& o) const = default;
};

// Checks lengths, x in [0,1], sum x <= k (within 1e-9), finite non-negative prices.
void validate_menu(const SymmetricMenu& m, int k);

struct BuyerChoice {
  int component = -1;  // -1 for the null option
  int option = -1;
  std::vector<double> x;
  double price = 0.0;
  double utility = 0.0;

  bool is_null() const { return component < 0; }
};

double option_utility(const std::vector<double>& v, const std::vector<double>& x, double price);

struct Variant {
  std::vector<double> x;
  double utility = 0.0;
};

// The group element maximizing the buyer's utility for this option: in each
// block the largest values receive the largest allocation entries.
Variant best_symmetric_variant(const std::vector<double>& v, const ItemGroup& group,
                               const std::vector<double>& x, double price);

// Utility-maximizing option including the null option. Utilities within
// tie_tolerance(v) of the best count as ties, resolved by higher price, then
// lower component index, then lower option index; the null option loses all
// ties. Exact utility ties are therefore always resolved toward the seller.
BuyerChoice choose(const std::vector<double>& v, const SymmetricMenu& m);

double tie_tolerance(const std::vector<double>& v);

// Menu with per-option data precomputed for repeated choice queries.
class PreparedMenu {
 public:
  explicit PreparedMenu(const SymmetricMenu& m);
  BuyerChoice choose(const std::vector<double>& v) const;
  // Price paid only; avoids materializing the allocation.
  double price_paid(const std::vector<double>& v) const;
  const SymmetricMenu& menu() const { return *menu_; }

 private:
  struct Best {
    int component = -1;
    int option = -1;
    double price = 0.0;
    double utility = 0.0;
  };
  Best find(const std::vector<double>& v) const;

  const SymmetricMenu* menu_;
  // sorted_x_[c][o]: option o's entries, block by block, each block descending.
  std::vector<std::vector<std::vector<double>>> sorted_x_;
};

double revenue_exact(const SymmetricMenu& m, const ProductDistribution& d,
                     std::uint64_t cap = kDefaultSupportCap);
Estimate revenue_mc(const SymmetricMenu& m, const ProductDistribution& d, const McConfig& mc);

std::vector<double> leftovers(const SymmetricMenu& m);

double modrev_objective(const SymmetricMenu& m, const ProductDistribution& d,
                        const std::vector<double>& w, std::uint64_t cap = kDefaultSupportCap);

SymmetricMenu scale_prices(const SymmetricMenu& m, double factor);

// Options priced above e are replaced by single-item lotteries; every price is
// multiplied by (1 - eps). Components mixing cheap and expensive options are
// split in two, keeping the group.
SymmetricMenu make_exclusive(const SymmetricMenu& m, double e, double eps);

// For each item with a reserve, appends the deterministic single-item option
// priced q_i + r_i (1 - x_i), where (x_i, q_i) is what the buyer valuing only
// item i at t picks; then multiplies every price by (1 - eps). Appended
// options live in one trailing component with the trivial group.
SymmetricMenu concat_exclusive(const SymmetricMenu& m, double t,
                               const std::vector<std::optional<double>>& r, double eps);

// Removes single-item lottery options that are dominated on every item of
// their orbit: another option reaches the item with at least the same
// probability at no higher price per unit of probability. Options are
// examined in order; among identical options the first survives.
SymmetricMenu prune_dominated(const SymmetricMenu& m);

struct ComplexityReport {
  // Distinct concrete options; counted per component when orbits are too
  // large to expand, which may double count across components.
  BigCount mc;
  BigCount declared_ssmc;  // overflow when components use different groups
  std::uint64_t declared_wsmc = 0;
};

ComplexityReport complexity_measures(const SymmetricMenu& m);

// Number of distinct concrete allocations in the option's orbit.
BigCount orbit_size(const ItemGroup& group, const std::vector<double>& x);

}  // namespace menuforge
