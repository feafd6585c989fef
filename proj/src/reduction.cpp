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

#include "menuforge/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "menuforge/discretize.hpp"
#include "menuforge/error.hpp"

namespace menuforge {

ReductionParams select_params(const ProductDistribution& d, double eps, double safety,
                              const BrevConfig& brev_config) {
  require(eps > 0.0 && eps <= 0.5, ErrorCode::kInvalidArgument, "eps must lie in (0, 1/2]");
  require(safety > 0.0 && std::isfinite(safety), ErrorCode::kInvalidArgument,
          "safety factor must be positive");
  ReductionParams p;
  p.eps = eps;
  p.safety = safety;
  p.srev_star_lower = srev_star(d, SrevStarMode::kUniformLower).revenue;
  p.brev = brev(d, brev_config).revenue;
  require(p.srev_star_lower > 0.0 || p.brev > 0.0, ErrorCode::kDegenerateInstance,
          "every benchmark is zero; the empty menu is optimal");
  p.rev_proxy = std::max(p.srev_star_lower, p.brev);
  p.h = safety * p.srev_star_lower / eps;
  p.e = std::max(p.h / (eps * eps), p.brev / eps);
  p.t = p.e / eps;
  for (const Marginal& m : d.marginals) {
    const MonopolyResult mono = monopoly_price(m, p.t);
    p.tail_revenue.push_back(mono.revenue);
    p.reserve.push_back(mono.price);
    p.w.push_back(mono.price ? *mono.price * m.prob_at_least(*mono.price) : 0.0);
  }
  return p;
}

namespace {

// Weights rounded down to (R/eps)(1-delta)^e; below eps R / n they vanish.
std::vector<double> discretize_weights(const std::vector<double>& w, double rev_proxy, double eps,
                                       double delta) {
  const double top = rev_proxy / eps;
  const double floor = eps * rev_proxy / static_cast<double>(w.size());
  std::vector<double> out;
  for (double wi : w) {
    out.push_back(wi < floor || wi <= 0.0 ? 0.0 : round_down_to_power(std::min(wi, top), top, 1.0 - delta));
  }
  return out;
}

std::size_t appended_count(const std::vector<std::optional<double>>& r) {
  return static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](const auto& x) { return x.has_value(); }));
}

}  // namespace

ReductionReport run_reduction(const ProductDistribution& d, double eps, const ReductionConfig& config) {
  ReductionReport rep;
  rep.final_menu.n = d.n();
  rep.bounded_menu.n = d.n();
  rep.group = ItemGroup::trivial(d.n());
  try {
    rep.params = select_params(d, eps, config.safety, config.brev);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateInstance) throw;
    rep.degenerate = true;
    rep.params.eps = eps;
    rep.params.safety = config.safety;
    rep.revenue = Estimate{0.0, 0.0, true};
    return rep;
  }
  const ReductionParams& p = rep.params;
  const int n = d.n();
  const double r_hat = p.rev_proxy;

  const ProductDistribution dt = truncate(d, p.t, std::vector<double>(n, 0.0), truncation_mode_for(d));
  rep.t_factor = p.t / r_hat;
  rep.delta = config.c_delta * eps * eps / (rep.t_factor * d.k);
  rep.weight_shortcut =
      std::any_of(p.w.begin(), p.w.end(), [&](double wi) { return wi >= r_hat / eps; });

  if (!rep.weight_shortcut) {
    DiscretizationParams dp;
    dp.delta = rep.delta;
    dp.t = rep.t_factor;
    dp.rev_proxy = r_hat;
    dp.k = d.k;
    dp.n = n;
    const Discretized disc = full_discretize(dt, dp);
    rep.w_discretized = discretize_weights(p.w, r_hat, eps, rep.delta);
    SolveConfig solve = config.solve;
    rep.group = solve.group ? *solve.group : group_items(disc.dist, rep.w_discretized);
    solve.group = rep.group;
    const ModRevSolution sol = solve_modrev(disc.dist, rep.w_discretized, solve);
    rep.rep_count = sol.rep_count;
    rep.pivots = sol.pivots;
    rep.bounded_objective = sol.objective;
    rep.bounded_menu = sol.menu;
  } else {
    rep.w_discretized.assign(n, 0.0);
  }

  const SymmetricMenu scaled = scale_prices(rep.bounded_menu, 1.0 - eps);
  const SymmetricMenu exclusive = make_exclusive(scaled, p.e, eps);
  rep.exclusive_appended = appended_count(p.reserve);
  rep.final_menu = prune_dominated(concat_exclusive(exclusive, p.t, p.reserve, eps));

  if (support_size(d).fits(config.support_cap)) {
    rep.revenue = Estimate{revenue_exact(rep.final_menu, d, config.support_cap), 0.0, true};
  } else {
    rep.revenue = revenue_mc(rep.final_menu, d, config.mc);
  }
  if (config.run_oracle && support_size(d).fits(config.oracle_cap)) {
    const ModRevSolution opt =
        brute_force_optimal(d, std::vector<double>(n, 0.0), config.oracle_cap, config.solve.lp);
    rep.oracle_revenue = opt.objective;
    if (opt.objective > 0.0) rep.ratio = rep.revenue.value / opt.objective;
  }
  rep.complexity_bounded = complexity_measures(rep.bounded_menu);
  rep.complexity_final = complexity_measures(rep.final_menu);
  return rep;
}

}  // namespace menuforge
