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
#include "menuforge/menu.hpp"
#include "menuforge/oracle.hpp"

namespace menuforge {

struct ReductionParams {
  double eps = 0.1;
  double safety = 2.0;
  double srev_star_lower = 0.0;
  double brev = 0.0;
  double rev_proxy = 0.0;  // R = max(srev_star_lower, brev)
  double h = 0.0;
  double e = 0.0;
  double t = 0.0;
  std::vector<double> tail_revenue;          // p_i
  std::vector<std::optional<double>> reserve;  // r_i >= T
  std::vector<double> w;                     // r_i Pr[v_i >= r_i]
};

struct ReductionConfig {
  double safety = 2.0;
  double c_delta = 1.0;
  SolveConfig solve;
  BrevConfig brev;
  std::uint64_t support_cap = kDefaultSupportCap;
  // Monte Carlo settings for evaluating the final menu when D is not enumerable.
  McConfig mc;
  bool run_oracle = true;
  std::uint64_t oracle_cap = kDefaultOracleCap;
};

// H = safety * SRev*_lower / eps, E = max(H / eps^2, BRev / eps), T = E / eps;
// per-item tail reserves are monopoly prices with floor T. Throws
// kDegenerateInstance when both benchmarks vanish.
ReductionParams select_params(const ProductDistribution& d, double eps, double safety = 2.0,
                              const BrevConfig& brev_config = {});

struct ReductionReport {
  ReductionParams params;
  bool degenerate = false;        // all-zero instance, empty menu
  bool weight_shortcut = false;   // some w_i >= R / eps, bounded menu left empty
  double delta = 0.0;
  double t_factor = 0.0;          // T / R
  ItemGroup group;
  std::vector<double> w_discretized;
  std::size_t rep_count = 0;
  std::int64_t pivots = 0;
  double bounded_objective = 0.0;
  SymmetricMenu bounded_menu;
  SymmetricMenu final_menu;
  std::size_t exclusive_appended = 0;  // concat options before pruning
  Estimate revenue;
  std::optional<double> oracle_revenue;
  std::optional<double> ratio;
  ComplexityReport complexity_bounded;
  ComplexityReport complexity_final;
};

ReductionReport run_reduction(const ProductDistribution& d, double eps, const ReductionConfig& config = {});

}  // namespace menuforge
