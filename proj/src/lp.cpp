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

#include "menuforge/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "menuforge/error.hpp"

namespace menuforge {

LPModel::LPModel(int num_vars)
    : objective(num_vars, 0.0), lower(num_vars, 0.0), upper(num_vars, kInf) {}

int LPModel::add_var(double obj, double lo, double hi) {
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

void LPModel::add_row(std::vector<LPTerm> terms, Relation rel, double rhs) {
  for (const LPTerm& t : terms) {
    require(t.var >= 0 && t.var < num_vars(), ErrorCode::kInvalidArgument,
            "LP row references unknown variable " + std::to_string(t.var));
  }
  require(std::isfinite(rhs), ErrorCode::kInvalidArgument, "LP row rhs must be finite");
  rows.push_back(LPRow{std::move(terms), rel, rhs});
}

void LPModel::add_dense_row(const std::vector<double>& coef, Relation rel, double rhs) {
  require(static_cast<int>(coef.size()) == num_vars(), ErrorCode::kLengthMismatch,
          "LP dense row width differs from variable count");
  std::vector<LPTerm> terms;
  for (int j = 0; j < num_vars(); ++j) {
    if (coef[j] != 0.0) terms.push_back({j, coef[j]});
  }
  add_row(std::move(terms), rel, rhs);
}

const char* lp_status_name(LPStatus status) {
  switch (status) {
    case LPStatus::kOptimal: return "Optimal";
    case LPStatus::kInfeasible: return "Infeasible";
    case LPStatus::kUnbounded: return "Unbounded";
  }
  return "Unknown";
}

namespace {

// Dictionary tableau in the style of CLRS: rows 0..m-1 hold the constraints,
// row m the phase-two objective and row m+1 the phase-one objective. Column n
// is the artificial variable and column n+1 the right-hand side. A perturbed
// tableau shifts every right-hand side up by a small random amount and carries
// the true one in column n+2; after the perturbed optimum the true values are
// swapped back in and dual simplex pivots restore feasibility.
// Thrown by a tableau that exceeds its stall budget, or by a perturbed
// tableau that cannot finish cleanly.
struct Abandon {};

class Tableau {
 public:
  using Real = long double;

  Tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
          const std::vector<double>& c, double eps, std::int64_t max_pivots, PivotRule rule,
          std::int64_t stall_limit = -1, bool perturb = false)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        w_(n_ + (perturb ? 3 : 2)),
        eps_(eps),
        max_pivots_(max_pivots),
        bland_(rule == PivotRule::kBland),
        stall_limit_(stall_limit),
        perturb_(perturb),
        basis_(m_),
        nonbasis_(n_ + 1),
        d_(static_cast<std::size_t>(m_ + 2) * w_, 0.0) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> shift(kPerturb, 2 * kPerturb);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) at(i, j) = a[i][j];
      basis_[i] = n_ + i;
      at(i, n_) = -1.0;
      at(i, n_ + 1) = b[i];
      if (perturb_) {
        at(i, n_ + 2) = b[i];
        at(i, n_ + 1) += shift(rng) * (1.0 + std::abs(b[i]));
      }
    }
    for (int j = 0; j < n_; ++j) {
      nonbasis_[j] = j;
      at(m_, j) = -c[j];
    }
    nonbasis_[n_] = -1;
    at(m_ + 1, n_) = 1.0;
  }

  // Returns the status and fills x (length n) when optimal.
  LPStatus solve(std::vector<double>& x) {
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && at(r, n_ + 1) < -eps_) {
      pivot(r, n_);
      if (!simplex(2) || at(m_ + 1, n_ + 1) < -eps_) {
        if (perturb_) throw Abandon{};
        return LPStatus::kInfeasible;
      }
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        // Artificial still basic at zero: swap it for the largest usable
        // entry, or leave it if the row is redundant.
        int s = -1;
        for (int j = 0; j <= n_; ++j) {
          if (std::abs(at(i, j)) > eps_ && (s == -1 || std::abs(at(i, j)) > std::abs(at(i, s)))) s = j;
        }
        if (s != -1) pivot(i, s);
      }
    }
    if (!simplex(1)) {
      if (perturb_) throw Abandon{};
      return LPStatus::kUnbounded;
    }
    if (perturb_) {
      for (int i = 0; i < m_ + 2; ++i) at(i, n_ + 1) = at(i, n_ + 2);
      dual_simplex();
    }
    x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && basis_[i] < n_) x[basis_[i]] = static_cast<double>(at(i, n_ + 1));
    }
    return LPStatus::kOptimal;
  }

  std::int64_t pivots() const { return pivots_; }

  // Shadow prices of the constraint rows at the optimum.
  std::vector<double> duals() {
    std::vector<double> y(m_, 0.0);
    for (int j = 0; j <= n_; ++j) {
      if (nonbasis_[j] >= n_) y[nonbasis_[j] - n_] = static_cast<double>(at(m_, j));
    }
    return y;
  }

 private:
  Real& at(int i, int j) { return d_[static_cast<std::size_t>(i) * w_ + j]; }

  void pivot(int r, int s) {
    if (++pivots_ > max_pivots_) {
      fail(ErrorCode::kNumericalFailure, "simplex pivot limit reached");
    }
    Real* prow = &d_[static_cast<std::size_t>(r) * w_];
    const Real inv = 1.0L / prow[s];
    nz_.clear();
    for (int j = 0; j < w_; ++j) {
      if (j != s && prow[j] != 0.0) nz_.push_back(j);
    }
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      Real* row = &d_[static_cast<std::size_t>(i) * w_];
      const Real f = row[s];
      if (f == 0.0L) continue;
      const Real g = f * inv;
      for (int j : nz_) row[j] -= prow[j] * g;
      row[s] = -g;
    }
    for (int j : nz_) prow[j] *= inv;
    prow[s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Bland's rule: enter the lowest-labelled improving column, leave on the
  // minimum ratio with ties to the lowest basic label.
  bool simplex(int phase) {
    const int obj = m_ + phase - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasis_[j] == -phase) continue;
        const Real dj = at(obj, j);
        if (dj >= -eps_) continue;
        if (s == -1) {
          s = j;
        } else if (bland_ ? nonbasis_[j] < nonbasis_[s]
                          : (dj < at(obj, s) || (dj == at(obj, s) && nonbasis_[j] < nonbasis_[s]))) {
          s = j;
        }
      }
      if (s == -1) return true;
      if (stall_limit_ >= 0 && pivots_ > stall_limit_) throw Abandon{};
      int r = -1;
      Real best = 0.0L;
      Real colmax = 0.0L;
      for (int i = 0; i < m_; ++i) {
        const Real a = at(i, s);
        if (a <= eps_) continue;
        colmax = std::max(colmax, a);
        const Real ratio = std::max(at(i, n_ + 1), Real{0}) / a;
        if (r == -1 || ratio < best || (ratio == best && basis_[i] < basis_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == -1) return false;
      if (at(r, s) < kSmallPivot * colmax) {
        // Harris pass: relax the ratio bound by the tolerance and take the
        // largest pivot below it.
        Real bound = std::numeric_limits<Real>::infinity();
        for (int i = 0; i < m_; ++i) {
          const Real a = at(i, s);
          if (a > eps_) bound = std::min(bound, (std::max(at(i, n_ + 1), Real{0}) + eps_) / a);
        }
        for (int i = 0; i < m_; ++i) {
          const Real a = at(i, s);
          if (a <= eps_ || std::max(at(i, n_ + 1), Real{0}) / a > bound) continue;
          if (a > at(r, s) || (a == at(r, s) && basis_[i] < basis_[r])) r = i;
        }
        best = std::max(at(r, n_ + 1), Real{0}) / at(r, s);
      }
      if (!bland_) {
        degenerate_run_ = best <= eps_ ? degenerate_run_ + 1 : 0;
        if (degenerate_run_ > kDegenerateLimit) bland_ = true;
      }
      pivot(r, s);
    }
  }

  // Phase-two dual simplex from a dual feasible basis: leave on the most
  // negative right-hand side, enter on the smallest reduced-cost ratio.
  void dual_simplex() {
    for (;;) {
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (at(i, n_ + 1) < -kCleanTol && (r == -1 || at(i, n_ + 1) < at(r, n_ + 1))) r = i;
      }
      if (r == -1) return;
      if (stall_limit_ >= 0 && pivots_ > stall_limit_) throw Abandon{};
      // Two passes as in the primal ratio test: bound the ratio with the
      // tolerance added, then take the largest pivot under the bound.
      Real bound = std::numeric_limits<Real>::infinity();
      for (int j = 0; j <= n_; ++j) {
        const Real a = at(r, j);
        if (nonbasis_[j] != -1 && a < -eps_) bound = std::min(bound, (std::max(at(m_, j), Real{0}) + eps_) / -a);
      }
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        const Real a = at(r, j);
        if (nonbasis_[j] == -1 || a >= -eps_ || std::max(at(m_, j), Real{0}) / -a > bound) continue;
        if (s == -1 || -a > -at(r, s)) s = j;
      }
      if (s == -1) throw Abandon{};
      pivot(r, s);
    }
  }

  int m_;
  int n_;
  int w_;
  double eps_;
  std::int64_t max_pivots_;
  std::int64_t pivots_ = 0;
  bool bland_;
  std::int64_t stall_limit_;
  bool perturb_;
  int degenerate_run_ = 0;
  static constexpr int kDegenerateLimit = 50;
  static constexpr Real kSmallPivot = 1e-6L;
  static constexpr double kPerturb = 1e-7;
  // Leftover infeasibility the cleanup tolerates. Row scaling can magnify it
  // by many orders on the unscaled model, hence far below eps.
  static constexpr Real kCleanTol = 1e-15L;
  std::vector<int> basis_;
  std::vector<int> nonbasis_;
  std::vector<Real> d_;
  std::vector<int> nz_;
};

// Geometric-mean equilibration: a <- diag(row) a diag(col). Factors are
// powers of two so scaling itself is exact.
void equilibrate(std::vector<std::vector<double>>& a, std::vector<double>& row,
                 std::vector<double>& col) {
  const std::size_t m = a.size();
  const std::size_t n = col.size();
  row.assign(m, 1.0);
  auto pow2 = [](double f) { return std::exp2(std::round(std::log2(f))); };
  for (int pass = 0; pass < 4; ++pass) {
    for (std::size_t i = 0; i < m; ++i) {
      double lo = INFINITY, hi = 0.0;
      for (double v : a[i]) {
        if (v == 0.0) continue;
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
      }
      if (hi == 0.0) continue;
      const double f = pow2(1.0 / std::sqrt(lo * hi));
      row[i] *= f;
      for (double& v : a[i]) v *= f;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double lo = INFINITY, hi = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double v = std::abs(a[i][j]);
        if (v == 0.0) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi == 0.0) continue;
      const double f = pow2(1.0 / std::sqrt(lo * hi));
      col[j] *= f;
      for (std::size_t i = 0; i < m; ++i) a[i][j] *= f;
    }
  }
}

struct TableauRun {
  LPStatus status = LPStatus::kInfeasible;
  std::vector<double> x;
  std::vector<double> duals;
  std::int64_t pivots = 0;
};

// Bland's rule can crawl through long runs of near-degenerate steps on badly
// scaled programs. After about 5 * min(m, n) pivots the solve restarts from the
// initial tableau with perturbed right-hand sides under kDantzigThenBland, and
// if that also fails within 20 * min(m, n) pivots or its optimum is rejected
// by `accept`, unperturbed.
template <typename Accept>
TableauRun run_tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                       const std::vector<double>& c, double eps, const LPOptions& options,
                       const Accept& accept) {
  TableauRun out;
  const std::int64_t size = std::min<std::int64_t>(b.size(), c.size()) + 1;
  int attempt = options.rule == PivotRule::kBland ? 0 : 2;
  for (;;) {
    const PivotRule rule = attempt == 0 ? PivotRule::kBland : PivotRule::kDantzigThenBland;
    const std::int64_t stall = attempt == 0 ? 5 * size : attempt == 1 ? 20 * size : -1;
    Tableau t(a, b, c, eps, options.max_pivots - out.pivots, rule, stall, attempt == 1);
    try {
      out.status = t.solve(out.x);
      out.pivots += t.pivots();
      if (out.status == LPStatus::kOptimal) out.duals = t.duals();
      if (attempt == 1 && out.status == LPStatus::kOptimal && !accept(out)) {
        ++attempt;
        continue;
      }
      return out;
    } catch (const Abandon&) {
      out.pivots += t.pivots();
      ++attempt;
    }
  }
}

// How an original variable is expressed in nonnegative tableau columns:
// x = offset + sign * y[col] (- y[neg_col] when split).
struct VarMap {
  double offset = 0.0;
  double sign = 1.0;
  int col = -1;
  int neg_col = -1;
};

}  // namespace

LPSolution lp_solve(const LPModel& model, const LPOptions& options) {
  const int nv = model.num_vars();
  require(static_cast<int>(model.lower.size()) == nv && static_cast<int>(model.upper.size()) == nv,
          ErrorCode::kLengthMismatch, "LP bounds width differs from objective");
  const double tol = options.tolerance;

  LPSolution sol;
  std::vector<VarMap> map(nv);
  int ncols = 0;
  std::vector<std::pair<int, double>> bound_rows;  // (column, hi - lo)
  for (int j = 0; j < nv; ++j) {
    const double lo = model.lower[j];
    const double hi = model.upper[j];
    require(!std::isnan(lo) && !std::isnan(hi), ErrorCode::kInvalidArgument, "LP bound is NaN");
    if (lo > hi) return sol;
    VarMap& vm = map[j];
    if (std::isfinite(lo)) {
      vm.offset = lo;
      vm.col = ncols++;
      if (std::isfinite(hi)) bound_rows.emplace_back(vm.col, hi - lo);
    } else if (std::isfinite(hi)) {
      vm.offset = hi;
      vm.sign = -1.0;
      vm.col = ncols++;
    } else {
      vm.col = ncols++;
      vm.neg_col = ncols++;
    }
  }

  std::vector<std::vector<double>> a;
  std::vector<double> b;
  auto emit = [&](const LPRow& row, double scale) {
    std::vector<double> dense(ncols, 0.0);
    double rhs = row.rhs;
    for (const LPTerm& t : row.terms) {
      const VarMap& vm = map[t.var];
      rhs -= t.coef * vm.offset;
      dense[vm.col] += t.coef * vm.sign;
      if (vm.neg_col >= 0) dense[vm.neg_col] -= t.coef;
    }
    for (double& v : dense) v *= scale;
    a.push_back(std::move(dense));
    b.push_back(rhs * scale);
  };
  for (const LPRow& row : model.rows) {
    if (row.rel != Relation::kGe) emit(row, 1.0);
    if (row.rel != Relation::kLe) emit(row, -1.0);
  }
  for (const auto& [col, width] : bound_rows) {
    std::vector<double> dense(ncols, 0.0);
    dense[col] = 1.0;
    a.push_back(std::move(dense));
    b.push_back(width);
  }

  std::vector<double> c(ncols, 0.0);
  for (int j = 0; j < nv; ++j) {
    const VarMap& vm = map[j];
    c[vm.col] += model.objective[j] * vm.sign;
    if (vm.neg_col >= 0) c[vm.neg_col] -= model.objective[j];
  }

  std::vector<double> row_scale;
  std::vector<double> col_scale(ncols, 1.0);
  equilibrate(a, row_scale, col_scale);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] *= row_scale[i];
  for (int j = 0; j < ncols; ++j) c[j] *= col_scale[j];

  // The tableau pivots at a tenth of the tolerance so the residual gate on
  // the unscaled model keeps some headroom.
  const double pivot_tol = 0.1 * tol;

  // Unscales y, checks residuals against the original model and fills sol.
  auto accept = [&](std::vector<double> y) {
    for (int j = 0; j < ncols; ++j) y[j] *= col_scale[j];
    sol.x.assign(nv, 0.0);
    for (int j = 0; j < nv; ++j) {
      const VarMap& vm = map[j];
      double v = vm.offset + vm.sign * y[vm.col];
      if (vm.neg_col >= 0) v -= y[vm.neg_col];
      sol.x[j] = v;
    }
    double residual = 0.0;
    for (int j = 0; j < nv; ++j) {
      const double v = sol.x[j];
      const double scale = 1.0 + std::abs(v);
      if (std::isfinite(model.lower[j])) residual = std::max(residual, (model.lower[j] - v) / scale);
      if (std::isfinite(model.upper[j])) residual = std::max(residual, (v - model.upper[j]) / scale);
    }
    for (const LPRow& row : model.rows) {
      double lhs = 0.0;
      double mag = 0.0;
      for (const LPTerm& t : row.terms) {
        lhs += t.coef * sol.x[t.var];
        mag += std::abs(t.coef * sol.x[t.var]);
      }
      const double scale = 1.0 + std::abs(row.rhs) + mag;
      double viol = 0.0;
      if (row.rel == Relation::kLe) viol = lhs - row.rhs;
      if (row.rel == Relation::kGe) viol = row.rhs - lhs;
      if (row.rel == Relation::kEq) viol = std::abs(lhs - row.rhs);
      residual = std::max(residual, viol / scale);
    }
    sol.max_residual = residual;
    double objv = 0.0;
    for (int j = 0; j < nv; ++j) objv += model.objective[j] * sol.x[j];
    sol.objective = objv;
    sol.status = LPStatus::kOptimal;
    return residual <= 10.0 * tol;
  };

  if (options.dualize && a.size() > 2 * static_cast<std::size_t>(ncols)) {
    // min b.u s.t. A^T u >= c, u >= 0, written as a maximization.
    const std::size_t m = a.size();
    std::vector<std::vector<double>> at(ncols, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (int j = 0; j < ncols; ++j) at[j][i] = -a[i][j];
    }
    std::vector<double> bt(ncols);
    for (int j = 0; j < ncols; ++j) bt[j] = -c[j];
    std::vector<double> ct(m);
    for (std::size_t i = 0; i < m; ++i) ct[i] = -b[i];
    const TableauRun dual =
        run_tableau(at, bt, ct, pivot_tol, options, [&](const TableauRun& r) { return accept(r.duals); });
    sol.pivots += dual.pivots;
    if (dual.status == LPStatus::kOptimal && accept(dual.duals)) return sol;
    // Only an accurate dual optimum is trusted. Dual infeasibility or
    // unboundedness can be an artefact of rounding on badly scaled programs,
    // so the primal solve below decides every other case.
  }
  LPOptions primal_options = options;
  primal_options.max_pivots = options.max_pivots - sol.pivots;
  const TableauRun primal =
      run_tableau(a, b, c, pivot_tol, primal_options, [&](const TableauRun& r) { return accept(r.x); });
  sol.pivots += primal.pivots;
  if (primal.status != LPStatus::kOptimal) {
    sol.status = primal.status;
    sol.x.clear();
    return sol;
  }
  if (!accept(primal.x)) {
    fail(ErrorCode::kNumericalFailure,
         "simplex solution violates constraints by " + std::to_string(sol.max_residual));
  }
  return sol;
}

}  // namespace menuforge
