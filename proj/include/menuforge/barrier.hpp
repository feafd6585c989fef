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

#include "menuforge/benchmarks.hpp"
#include "menuforge/dist.hpp"

namespace menuforge {

// Asymmetric additive instance on which selling separately, bundling and
// symmetrization all lose a constant factor. Item i carries one large atom
// (1 w.p. eps/n for even i, 1/2 w.p. 2eps/n for odd i) and, for every l with
// r_i[l] = 1, an atom at eps (1-eps)^l / ln n of mass ln n (1-eps)^-l / (nk).
struct BarrierSpec {
  int n = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  int k = 0;
  // Positions of the k/2 ones of each r_i, ascending.
  std::vector<std::vector<int>> ones;
  // Vectors drawn in total, rejected ones included.
  std::uint64_t draws = 0;
};

// ln(n / ln n) / eps + 1 rounded to the nearest even integer, at least 2.
int barrier_k(int n, double eps);

struct BarrierInstance {
  ProductDistribution dist;
  BarrierSpec spec;
};

// Draws r_1..r_n one at a time, each uniform among vectors with k/2 ones and
// redrawn until it has at least k/6 ones where every earlier vector has a
// zero; `max_retries` bounds the draws per vector. Throws kSeparationFailed
// when a vector runs out of draws and kNegativeMass when an item's non-zero
// atoms carry more than probability 1.
BarrierInstance gen_barrier(int n, double eps, std::uint64_t seed, std::uint64_t max_retries = 10'000'000,
                            std::optional<int> k_override = std::nullopt);

struct BarrierFeatures {
  double val = 0.0;  // sum of E[v_i]
  double val_target = 0.0;  // 3 eps / 2
  bool val_ok = false;

  double separate_revenue = 0.0;  // price 1 on even items, 1/2 on odd
  double separate_target = 0.0;  // eps
  bool separate_ok = false;
  double srev = 0.0;  // optimal per-item prices

  // Largest p Pr[v_i >= p] over items and grid prices eps (1-eps)^j / ln n.
  double max_grid_revenue = 0.0;
  double grid_bound = 0.0;  // eps / n
  bool grid_ok = false;

  double max_value = 0.0;
  bool values_bounded = false;  // every v_i <= 1

  bool masses_valid = false;
  double min_zero_mass = 0.0;

  int min_separation = 0;
  bool separation_ok = false;

  // Reported only: the in-sample best bundle price and its revenue on an
  // independent sample stream, to compare with eps.
  BundleResult brev_in_sample;
  Estimate brev_holdout;

  bool exact_checks_ok() const {
    return val_ok && separate_ok && grid_ok && values_bounded && masses_valid && separation_ok;
  }
};

// Exact checks use tolerance 1e-9 for Val and the separate-sale revenue and
// 1e-12 for the grid-price bound. The bundle estimate uses mc.seed for the
// price search and mc.seed + 1 for the holdout.
BarrierFeatures check_features(const ProductDistribution& d, const BarrierSpec& spec,
                               const McConfig& mc = {10'000, 0});

}  // namespace menuforge
