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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace menuforge {

enum class Relation { kLe, kGe, kEq };

struct LPTerm {
  int var;
  double coef;
};

struct LPRow {
  std::vector<LPTerm> terms;
  Relation rel = Relation::kLe;
  double rhs = 0.0;
};

// Maximize objective·x subject to rows and lower[j] <= x[j] <= upper[j].
// Rows are stored sparsely; the solver works on a dense tableau.
class LPModel {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  LPModel() = default;
  explicit LPModel(int num_vars);

  int add_var(double obj, double lo = 0.0, double hi = kInf);
  void add_row(std::vector<LPTerm> terms, Relation rel, double rhs);
  void add_dense_row(const std::vector<double>& coef, Relation rel, double rhs);

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LPRow> rows;
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded };

const char* lp_status_name(LPStatus status);

struct LPSolution {
  LPStatus status = LPStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::int64_t pivots = 0;
  // Largest scaled constraint or bound violation of x (Optimal only).
  double max_residual = 0.0;
};

enum class PivotRule {
  kBland,
  // Largest reduced cost, switching to Bland's rule for good after a run of
  // degenerate pivots; keeps the termination guarantee.
  kDantzigThenBland,
};

struct LPOptions {
  double tolerance = 1e-9;
  PivotRule rule = PivotRule::kBland;
  // Solve the dual program when rows outnumber columns more than twofold.
  bool dualize = true;
  // Safety net against numerical stalling; exceeding it throws kNumericalFailure.
  std::int64_t max_pivots = 200'000;
};

// Two-phase primal simplex with Bland's rule. A tableau that runs past about
// 5 * min(rows, cols) pivots is restarted under kDantzigThenBland with slightly
// perturbed right-hand sides, cleaned up by dual simplex pivots; should that
// fail too, once more without perturbation. Throws kNumericalFailure when the
// recovered primal violates a row or bound by more than 10 * tolerance, or
// when max_pivots runs out.
LPSolution lp_solve(const LPModel& model, const LPOptions& options = {});

}  // namespace menuforge
