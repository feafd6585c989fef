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

#include <random>
#include <vector>

#include "menuforge/lp.hpp"

namespace menuforge::testing {

// Dense random LP over x >= 0 that is feasible (a random nonnegative point
// satisfies every row) and bounded (one row has strictly positive
// coefficients). Relations are mixed so both simplex phases get exercised.
inline LPModel random_bounded_lp(std::mt19937_64& rng, int max_vars = 6, int max_rows = 8) {
  std::uniform_int_distribution<int> nv_dist(1, max_vars);
  const int nv = nv_dist(rng);
  std::uniform_int_distribution<int> nr_dist(1, max_rows);
  const int nr = nr_dist(rng);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Small integers make degenerate vertices common, which is where cycling lives.
  std::uniform_int_distribution<int> small(-2, 3);
  const bool integral = unit(rng) < 0.5;

  LPModel model(nv);
  for (int j = 0; j < nv; ++j) model.objective[j] = integral ? small(rng) : coef(rng);
  std::vector<double> x0(nv);
  for (double& v : x0) v = integral ? static_cast<double>(small(rng) < 1 ? 0 : 1) : 2.0 * unit(rng);

  for (int r = 0; r < nr; ++r) {
    std::vector<double> row(nv);
    double lhs = 0.0;
    for (int j = 0; j < nv; ++j) {
      row[j] = integral ? small(rng) : coef(rng);
      if (r == 0) row[j] = integral ? 1.0 + (small(rng) + 2) : 0.5 + unit(rng);
      lhs += row[j] * x0[j];
    }
    const double pick = unit(rng);
    const double slack = integral ? 0.0 : (unit(rng) < 0.3 ? 0.0 : unit(rng));
    if (r == 0 || pick < 0.6) {
      model.add_dense_row(row, Relation::kLe, lhs + slack);
    } else if (pick < 0.85) {
      model.add_dense_row(row, Relation::kGe, lhs - slack);
    } else {
      model.add_dense_row(row, Relation::kEq, lhs);
    }
  }
  return model;
}

}  // namespace menuforge::testing
