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

#include "menuforge/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "menuforge/error.hpp"
#include "menuforge/menu.hpp"
#include "menuforge/parallel.hpp"

namespace menuforge {

namespace {
constexpr double kNoSale = std::numeric_limits<double>::infinity();
}  // namespace

MonopolyResult monopoly_price(const Marginal& m, double floor) {
  require(floor >= 0.0, ErrorCode::kInvalidArgument, "monopoly floor must be non-negative");
  MonopolyResult best;
  for (double p : m.values()) {
    if (p < floor) continue;
    const double rev = p * m.prob_at_least(p);
    if (!best.price || rev > best.revenue) {
      best.price = p;
      best.revenue = rev;
    }
  }
  return best;
}

BundleResult brev(const ProductDistribution& d, const BrevConfig& config) {
  BundleResult out;
  const BigCount size = support_size(d);
  if (size.fits(config.support_cap)) {
    std::map<double, std::vector<double>> mass;  // bundle value -> probability terms
    enumerate_support(d, [&](const std::vector<double>& v, double prob) {
      mass[value_of_all(v, d.k)].push_back(prob);
    }, config.support_cap);
    // Walk from the top so the tail probability is a running sum.
    std::vector<double> tail_terms;
    for (auto it = mass.rbegin(); it != mass.rend(); ++it) {
      tail_terms.insert(tail_terms.end(), it->second.begin(), it->second.end());
      const double rev = it->first * exact_sum(tail_terms);
      // Descending scan: ties keep moving toward the smaller price.
      if (rev >= out.revenue) {
        out.price = it->first;
        out.revenue = rev;
      }
    }
    out.exact = true;
    return out;
  }
  require(config.mc.samples >= 2, ErrorCode::kInvalidArgument, "Monte Carlo needs at least 2 samples");
  const auto parts = map_chunks(config.mc.samples, 4096, [&](std::size_t b, std::size_t e) {
    std::vector<double> vals;
    std::vector<double> v;
    for (std::size_t s = b; s < e; ++s) {
      sample_into(d, config.mc.seed, s, v);
      vals.push_back(value_of_all(v, d.k));
    }
    return vals;
  });
  std::vector<double> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  const std::size_t m = all.size();
  const int cands = std::max(1, config.quantile_candidates);
  out.exact = false;
  for (int c = 0; c < cands; ++c) {
    const std::size_t idx = std::min(m - 1, static_cast<std::size_t>(
                                                 static_cast<double>(c) / cands * static_cast<double>(m)));
    const double p = all[idx];
    const std::size_t first = static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), p) - all.begin());
    const double rev = p * static_cast<double>(m - first) / static_cast<double>(m);
    if (rev > out.revenue) {
      out.price = p;
      out.revenue = rev;
    }
  }
  return out;
}

double exclusive_revenue(const ProductDistribution& d, const std::vector<double>& prices,
                         std::uint64_t cap) {
  SymmetricMenu menu;
  menu.n = d.n();
  SymmetricComponent comp{ItemGroup::trivial(d.n()), {}};
  for (int i = 0; i < d.n(); ++i) {
    if (!std::isfinite(prices[i])) continue;
    MenuOption opt{std::vector<double>(d.n(), 0.0), prices[i]};
    opt.x[i] = 1.0;
    comp.options.push_back(std::move(opt));
  }
  if (!comp.options.empty()) menu.components.push_back(std::move(comp));
  return revenue_exact(menu, d, cap);
}

PricedRevenue srev_star(const ProductDistribution& d, SrevStarMode mode, std::uint64_t budget) {
  const int n = d.n();
  if (mode == SrevStarMode::kUniformLower) {
    std::vector<double> candidates;
    for (const Marginal& m : d.marginals) {
      for (double v : m.values()) {
        if (v > 0.0) candidates.push_back(v);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    PricedRevenue best{std::vector<double>(n, 0.0), 0.0};
    for (double p : candidates) {
      double none = 1.0;
      for (const Marginal& m : d.marginals) none *= m.prob_below(p);
      const double rev = p * (1.0 - none);
      if (rev > best.revenue) best = PricedRevenue{std::vector<double>(n, p), rev};
    }
    return best;
  }

  std::vector<std::vector<double>> grids(n);
  BigCount grid_size = BigCount::of(1);
  for (int i = 0; i < n; ++i) {
    for (double v : d.marginals[i].values()) {
      if (v > 0.0) grids[i].push_back(v);
    }
    grids[i].push_back(kNoSale);
    grid_size = grid_size * BigCount::of(grids[i].size());
  }
  const BigCount work = grid_size * support_size(d);
  require(work.fits(budget), ErrorCode::kBudgetExceeded,
          "exclusive price search needs more than " + std::to_string(budget) + " evaluations");

  struct Best {
    double revenue = -1.0;
    std::uint64_t index = 0;
  };
  auto decode = [&](std::uint64_t idx) {
    std::vector<double> prices(n);
    for (int i = n - 1; i >= 0; --i) {
      prices[i] = grids[i][idx % grids[i].size()];
      idx /= grids[i].size();
    }
    return prices;
  };
  const auto parts = map_chunks(grid_size.value, 64, [&](std::size_t b, std::size_t e) {
    Best best;
    for (std::size_t idx = b; idx < e; ++idx) {
      const double rev = exclusive_revenue(d, decode(idx), budget);
      if (rev > best.revenue) best = Best{rev, idx};
    }
    return best;
  });
  Best best;
  for (const Best& p : parts) {
    if (p.revenue > best.revenue) best = p;
  }
  return PricedRevenue{decode(best.index), std::max(0.0, best.revenue)};
}

PricedRevenue srev(const ProductDistribution& d, std::uint64_t budget) {
  if (d.additive()) {
    PricedRevenue out;
    std::vector<double> revs;
    for (const Marginal& m : d.marginals) {
      const MonopolyResult r = monopoly_price(m, 0.0);
      out.prices.push_back(r.price.value_or(0.0));
      revs.push_back(r.revenue);
    }
    out.revenue = exact_sum(revs);
    return out;
  }
  require(d.unit_demand(), ErrorCode::kUnsupportedClass,
          "selling separately is only supported for additive or unit-demand buyers");
  return srev_star(d, SrevStarMode::kExactSmall, budget);
}

BenchmarkReport benchmark_report(const ProductDistribution& d, const BrevConfig& config,
                                 std::uint64_t search_budget) {
  BenchmarkReport rep;
  for (const Marginal& m : d.marginals) rep.per_item_monopoly.push_back(monopoly_price(m, 0.0));
  rep.brev = brev(d, config);
  rep.srev_star_lower = srev_star(d, SrevStarMode::kUniformLower);
  try {
    rep.srev_star_exact = srev_star(d, SrevStarMode::kExactSmall, search_budget);
  } catch (const Error& e) {
    if (!is_budget_error(e.code())) throw;
  }
  if (d.additive()) {
    rep.srev = srev(d, search_budget);
  } else if (d.unit_demand() && rep.srev_star_exact) {
    rep.srev = rep.srev_star_exact;
  }
  return rep;
}

}  // namespace menuforge
