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

#include "support/bfs_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace menuforge::testing {
namespace {

// Solves the square system m * x = rhs by Gaussian elimination with partial
// pivoting; false if singular.
bool solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs,
                  std::vector<double>& x) {
  const int n = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-11) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return true;
}

}  // namespace

std::optional<double> bfs_enumerate_max(const LPModel& model, double feas_tol) {
  const int n = model.num_vars();
  for (int j = 0; j < n; ++j) {
    if (model.lower[j] != 0.0 || std::isfinite(model.upper[j])) {
      throw std::invalid_argument("bfs oracle expects x >= 0 bounds only");
    }
  }
  // All constraints as dense a·x <= b, nonnegativity included as -x_j <= 0.
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (const LPRow& row : model.rows) {
    std::vector<double> dense(n, 0.0);
    for (const LPTerm& t : row.terms) dense[t.var] += t.coef;
    if (row.rel != Relation::kGe) {
      a.push_back(dense);
      b.push_back(row.rhs);
    }
    if (row.rel != Relation::kLe) {
      for (double& v : dense) v = -v;
      a.push_back(dense);
      b.push_back(-row.rhs);
    }
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> dense(n, 0.0);
    dense[j] = -1.0;
    a.push_back(dense);
    b.push_back(0.0);
  }
  const int m = static_cast<int>(a.size());

  std::optional<double> best;
  std::vector<int> pick(n);
  std::vector<double> x;
  // Iterate n-subsets of [m] in lexicographic order.
  for (int i = 0; i < n; ++i) pick[i] = i;
  if (n > m) return best;
  for (;;) {
    std::vector<std::vector<double>> sq(n);
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) {
      sq[i] = a[pick[i]];
      rhs[i] = b[pick[i]];
    }
    if (solve_square(sq, rhs, x)) {
      bool ok = true;
      for (int r = 0; r < m && ok; ++r) {
        double lhs = 0.0;
        double mag = 0.0;
        for (int j = 0; j < n; ++j) {
          lhs += a[r][j] * x[j];
          mag += std::abs(a[r][j] * x[j]);
        }
        ok = lhs <= b[r] + feas_tol * (1.0 + std::abs(b[r]) + mag);
      }
      if (ok) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += model.objective[j] * x[j];
        if (!best || v > *best) best = v;
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == m - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

}  // namespace menuforge::testing
