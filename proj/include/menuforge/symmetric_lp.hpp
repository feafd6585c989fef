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
#include "menuforge/lp.hpp"
#include "menuforge/menu.hpp"

namespace menuforge {

inline constexpr std::uint64_t kDefaultRepCap = 1000;

// Items share a block iff their marginals agree atom by atom (values and
// probabilities within 1e-12) and their weights agree within 1e-12.
ItemGroup group_items(const ProductDistribution& d, const std::vector<double>& w);

// Throws kAsymmetricInstance unless marginals and weights are constant on blocks.
void check_symmetric(const ProductDistribution& d, const std::vector<double>& w, const ItemGroup& g);

// One valuation per equivalence class, values non-increasing inside every
// block. prob is the mass of the vector itself, multiplicity the class size,
// and q = prob * multiplicity the mass of the class.
struct CanonicalRep {
  std::vector<double> values;
  double prob = 0.0;
  std::uint64_t multiplicity = 1;
  double q = 0.0;
};

// Number of classes: the product over blocks of multiset coefficients.
BigCount canonical_rep_count(const ProductDistribution& d, const ItemGroup& g);

// Throws kBudgetExceeded when the class count is above budget.
std::vector<CanonicalRep> canonical_reps(const ProductDistribution& d, const ItemGroup& g,
                                         std::uint64_t budget = kDefaultRepCap);

// Variable layout of the ModRevMax program.
struct ModRevLayout {
  int reps = 0;
  int n = 0;
  int price(int r) const { return r * (n + 1); }
  int alloc(int r, int i) const { return r * (n + 1) + 1 + i; }
  int leftover(int i) const { return reps * (n + 1) + i; }
  int num_vars() const { return reps * (n + 1) + n; }
};

struct ModRevProgram {
  LPModel model;
  ModRevLayout layout;
  int ic_rows = 0;
};

// Prices p(v) >= 0, allocations x_i(v) and leftovers l_i in [0,1]; maximizes
// sum Q(v) p(v) + sum w_i l_i subject to leftover coupling inside blocks,
// demand, pairwise incentive compatibility, sorted allocations inside blocks
// and individual rationality.
ModRevProgram build_modrev_lp(const std::vector<CanonicalRep>& reps, const std::vector<double>& w,
                              int k, const ItemGroup& g);

struct SolveConfig {
  std::uint64_t rep_cap = kDefaultRepCap;
  LPOptions lp;
  // Use this group instead of the one detected by group_items.
  std::optional<ItemGroup> group;
};

struct ModRevSolution {
  SymmetricMenu menu;
  double objective = 0.0;
  std::size_t rep_count = 0;
  std::int64_t pivots = 0;
};

ModRevSolution solve_modrev(const ProductDistribution& d, const std::vector<double>& w,
                            const SolveConfig& config = {});

}  // namespace menuforge
