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

#include "menuforge/symmetric_lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "menuforge/error.hpp"

namespace menuforge {

namespace {

constexpr double kMatchTol = 1e-12;

bool same_marginal(const Marginal& a, const Marginal& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (std::abs(a.values()[t] - b.values()[t]) > kMatchTol) return false;
    if (std::abs(a.probs()[t] - b.probs()[t]) > kMatchTol) return false;
  }
  return true;
}

// All count vectors of length `kinds` summing to `total`, in lexicographic
// order with the first count largest first.
void count_vectors(int total, int kinds, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == kinds - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int c = total; c >= 0; --c) {
    cur.push_back(c);
    count_vectors(total - c, kinds, cur, out);
    cur.pop_back();
  }
}

BigCount multiset_coefficient(int total, int kinds) {
  // C(total + kinds - 1, kinds - 1)
  std::vector<int> parts{total, kinds - 1};
  return multinomial(parts);
}

}  // namespace

ItemGroup group_items(const ProductDistribution& d, const std::vector<double>& w) {
  require(static_cast<int>(w.size()) == d.n(), ErrorCode::kLengthMismatch,
          "weight vector length differs from item count");
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < d.n(); ++i) {
    bool placed = false;
    for (std::vector<int>& b : blocks) {
      const int r = b.front();
      if (same_marginal(d.marginals[r], d.marginals[i]) && std::abs(w[r] - w[i]) <= kMatchTol) {
        b.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) blocks.push_back({i});
  }
  return ItemGroup(d.n(), std::move(blocks));
}

void check_symmetric(const ProductDistribution& d, const std::vector<double>& w, const ItemGroup& g) {
  require(g.n() == d.n() && static_cast<int>(w.size()) == d.n(), ErrorCode::kLengthMismatch,
          "group, weights and distribution differ in item count");
  for (const std::vector<int>& b : g.blocks()) {
    for (int i : b) {
      require(same_marginal(d.marginals[b.front()], d.marginals[i]), ErrorCode::kAsymmetricInstance,
              "items " + std::to_string(b.front()) + " and " + std::to_string(i) +
                  " share a block but have different marginals");
      require(std::abs(w[i] - w[b.front()]) <= kMatchTol, ErrorCode::kAsymmetricInstance,
              "items " + std::to_string(b.front()) + " and " + std::to_string(i) +
                  " share a block but have different weights");
    }
  }
}

BigCount canonical_rep_count(const ProductDistribution& d, const ItemGroup& g) {
  BigCount total = BigCount::of(1);
  for (const std::vector<int>& b : g.blocks()) {
    total = total * multiset_coefficient(static_cast<int>(b.size()),
                                         static_cast<int>(d.marginals[b.front()].size()));
  }
  return total;
}

std::vector<CanonicalRep> canonical_reps(const ProductDistribution& d, const ItemGroup& g,
                                         std::uint64_t budget) {
  const BigCount count = canonical_rep_count(d, g);
  require(count.fits(budget), ErrorCode::kBudgetExceeded,
          "symmetry classes exceed the representative budget of " + std::to_string(budget) +
              (count.overflow ? std::string(" (count overflows)") : " (|C| = " + std::to_string(count.value) + ")"));
  const int nb = static_cast<int>(g.blocks().size());
  // Per block: its count vectors plus the induced sorted values, vector
  // probability and multiplicity.
  struct BlockChoice {
    std::vector<double> values;  // in block item order, non-increasing
    double prob = 1.0;
    std::uint64_t mult = 1;
  };
  std::vector<std::vector<BlockChoice>> choices(nb);
  for (int b = 0; b < nb; ++b) {
    const std::vector<int>& block = g.blocks()[b];
    const Marginal& m = d.marginals[block.front()];
    const int kinds = static_cast<int>(m.size());
    std::vector<std::vector<int>> vecs;
    std::vector<int> cur;
    count_vectors(static_cast<int>(block.size()), kinds, cur, vecs);
    for (const std::vector<int>& counts : vecs) {
      BlockChoice ch;
      // Largest values first.
      for (int a = kinds - 1; a >= 0; --a) {
        for (int c = 0; c < counts[a]; ++c) {
          ch.values.push_back(m.values()[a]);
          ch.prob *= m.probs()[a];
        }
      }
      ch.mult = multinomial(counts).value;
      choices[b].push_back(std::move(ch));
    }
  }
  std::vector<CanonicalRep> reps;
  reps.reserve(count.value);
  std::vector<std::size_t> digit(nb, 0);
  for (std::uint64_t idx = 0; idx < count.value; ++idx) {
    CanonicalRep rep;
    rep.prob = 1.0;
    rep.values.assign(d.n(), 0.0);
    for (int b = 0; b < nb; ++b) {
      const BlockChoice& ch = choices[b][digit[b]];
      const std::vector<int>& block = g.blocks()[b];
      for (std::size_t t = 0; t < block.size(); ++t) rep.values[block[t]] = ch.values[t];
      rep.prob *= ch.prob;
      rep.multiplicity *= ch.mult;
    }
    rep.q = rep.prob * static_cast<double>(rep.multiplicity);
    reps.push_back(std::move(rep));
    for (int b = nb - 1; b >= 0; --b) {
      if (++digit[b] < choices[b].size()) break;
      digit[b] = 0;
    }
  }
  return reps;
}

ModRevProgram build_modrev_lp(const std::vector<CanonicalRep>& reps, const std::vector<double>& w,
                              int k, const ItemGroup& g) {
  require(!reps.empty(), ErrorCode::kInvalidArgument, "no representatives");
  const int n = g.n();
  require(static_cast<int>(w.size()) == n, ErrorCode::kLengthMismatch,
          "weight vector length differs from item count");
  ModRevProgram prog;
  ModRevLayout& lay = prog.layout;
  lay.reps = static_cast<int>(reps.size());
  lay.n = n;
  LPModel& lp = prog.model;
  for (int r = 0; r < lay.reps; ++r) {
    lp.add_var(reps[r].q, 0.0, LPModel::kInf);
    for (int i = 0; i < n; ++i) lp.add_var(0.0, 0.0, 1.0);
  }
  for (int i = 0; i < n; ++i) lp.add_var(w[i], 0.0, 1.0);

  for (int r = 0; r < lay.reps; ++r) {
    // Leftovers: x_j(v) + l_i <= 1 for i ~ j.
    for (const std::vector<int>& block : g.blocks()) {
      for (int i : block) {
        for (int j : block) {
          lp.add_row({{lay.alloc(r, j), 1.0}, {lay.leftover(i), 1.0}}, Relation::kLe, 1.0);
        }
      }
    }
    // Demand.
    std::vector<LPTerm> demand;
    for (int i = 0; i < n; ++i) demand.push_back({lay.alloc(r, i), 1.0});
    lp.add_row(std::move(demand), Relation::kLe, static_cast<double>(k));
    // Sorted allocations inside blocks.
    for (const std::vector<int>& block : g.blocks()) {
      for (std::size_t a = 0; a < block.size(); ++a) {
        for (std::size_t b = a + 1; b < block.size(); ++b) {
          lp.add_row({{lay.alloc(r, block[a]), 1.0}, {lay.alloc(r, block[b]), -1.0}}, Relation::kGe, 0.0);
        }
      }
    }
    // Individual rationality against the null option.
    std::vector<LPTerm> ir;
    for (int i = 0; i < n; ++i) {
      if (reps[r].values[i] != 0.0) ir.push_back({lay.alloc(r, i), reps[r].values[i]});
    }
    ir.push_back({lay.price(r), -1.0});
    lp.add_row(std::move(ir), Relation::kGe, 0.0);
  }
  // Incentive compatibility between every ordered pair of representatives.
  for (int r = 0; r < lay.reps; ++r) {
    for (int s = 0; s < lay.reps; ++s) {
      if (r == s) continue;
      std::vector<LPTerm> ic;
      for (int i = 0; i < n; ++i) {
        const double v = reps[r].values[i];
        if (v == 0.0) continue;
        ic.push_back({lay.alloc(r, i), v});
        ic.push_back({lay.alloc(s, i), -v});
      }
      ic.push_back({lay.price(r), -1.0});
      ic.push_back({lay.price(s), 1.0});
      lp.add_row(std::move(ic), Relation::kGe, 0.0);
      ++prog.ic_rows;
    }
  }
  return prog;
}

ModRevSolution solve_modrev(const ProductDistribution& d, const std::vector<double>& w,
                            const SolveConfig& config) {
  require(static_cast<int>(w.size()) == d.n(), ErrorCode::kLengthMismatch,
          "weight vector length differs from item count");
  for (double wi : w) {
    require(std::isfinite(wi) && wi >= 0.0, ErrorCode::kInvalidArgument, "weights must be non-negative");
  }
  const ItemGroup g = config.group ? *config.group : group_items(d, w);
  check_symmetric(d, w, g);
  const std::vector<CanonicalRep> reps = canonical_reps(d, g, config.rep_cap);
  const ModRevProgram prog = build_modrev_lp(reps, w, d.k, g);
  const LPSolution sol = lp_solve(prog.model, config.lp);
  require(sol.status == LPStatus::kOptimal, ErrorCode::kNumericalFailure,
          std::string("ModRevMax program reported ") + lp_status_name(sol.status));

  ModRevSolution out;
  out.objective = sol.objective;
  out.rep_count = reps.size();
  out.pivots = sol.pivots;
  out.menu.n = d.n();
  SymmetricComponent comp{g, {}};
  const ModRevLayout& lay = prog.layout;
  for (int r = 0; r < lay.reps; ++r) {
    MenuOption opt;
    opt.price = std::max(0.0, sol.x[lay.price(r)]);
    opt.x.resize(d.n());
    bool any = false;
    for (int i = 0; i < d.n(); ++i) {
      opt.x[i] = std::clamp(sol.x[lay.alloc(r, i)], 0.0, 1.0);
      any = any || opt.x[i] != 0.0;
    }
    if (!any && opt.price == 0.0) continue;
    comp.options.push_back(std::move(opt));
  }
  if (!comp.options.empty()) out.menu.components.push_back(std::move(comp));
  return out;
}

}  // namespace menuforge
