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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "menuforge/benchmarks.hpp"
#include "menuforge/discretize.hpp"
#include "menuforge/error.hpp"
#include "menuforge/oracle.hpp"
#include "support/generators.hpp"

namespace menuforge {
namespace {

using testing::uniform;
using testing::uniform_int;

DiscretizationParams params_for(const ProductDistribution& d, double delta) {
  DiscretizationParams p;
  p.delta = delta;
  p.k = d.k;
  p.n = d.n();
  p.rev_proxy = std::max(brev(d).revenue, 1e-3);
  double top = 0.0;
  for (const Marginal& m : d.marginals) top = std::max(top, m.max_value());
  p.t = std::max(1.0, top / p.rev_proxy);
  return p;
}

// Coupled pairs (v_i, v'_i, prob) for one item.
std::vector<std::array<double, 3>> coupled_atoms(const Marginal& a, const Marginal& b,
                                                 const std::vector<std::vector<std::pair<int, double>>>& rows) {
  std::vector<std::array<double, 3>> out;
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (const auto& [t, p] : rows[s]) out.push_back({a.values()[s], b.values()[t], a.probs()[s] * p});
  }
  return out;
}

TEST(RoundDown, Examples) {
  EXPECT_EQ(round_down_to_power(1.0, 1.0, 0.5), 1.0);
  EXPECT_EQ(round_down_to_power(0.6, 1.0, 0.5), 0.5);
  EXPECT_EQ(round_down_to_power(0.3, 1.0, 0.5), 0.25);
  EXPECT_EQ(round_down_to_power(0.25, 1.0, 0.5), 0.25);
}

TEST(RoundDown, NeverRoundsUp) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20000; ++trial) {
    const double base = uniform(rng, 0.01, 0.99);
    const double top = uniform(rng, 0.1, 100.0);
    const double v = top * std::pow(base, uniform(rng, 0.0, 30.0));
    const double r = round_down_to_power(v, top, base);
    EXPECT_LE(r, v);
    EXPECT_GT(r, base * v * (1 - 1e-12));
  }
  // Exact powers stay put.
  for (int e = 0; e < 40; ++e) EXPECT_EQ(round_down_to_power(std::ldexp(3.0, -e), 3.0, 0.5), std::ldexp(3.0, -e));
}

TEST(ValueDiscretize, Examples) {
  ProductDistribution d = make_product({{0.05, 0.6, 1.0}}, {{0.2, 0.3, 0.5}}, 1);
  DiscretizationParams p{0.5, 1.0, 1.0, 1, 1};
  Discretized out = value_discretize(d, p);
  EXPECT_EQ(out.dist.marginals[0].values(), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(out.dist.marginals[0].probs(), (std::vector<double>{0.2, 0.3, 0.5}));
  validate_coupling(d, out.dist, out.coupling);

  ProductDistribution over = make_product({{2.0}}, {{1.0}}, 1);
  try {
    value_discretize(over, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundednessViolated);
  }
}

TEST(ValueDiscretize, PointwiseInvariants) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    const int k = uniform_int(rng, 1, n);
    ProductDistribution d = testing::random_product(rng, n, 4, k, 5.0, false);
    const DiscretizationParams p = params_for(d, uniform(rng, 0.05, 0.9) / k);
    Discretized out = value_discretize(d, p);
    validate_coupling(d, out.dist, out.coupling);
    const double floor = p.delta * p.rev_proxy / p.k;
    for (int i = 0; i < n; ++i) {
      for (const auto& [v, v2, prob] : coupled_atoms(d.marginals[i], out.dist.marginals[i], out.coupling.items[i])) {
        EXPECT_LE(v2, v);
        if (v >= floor) {
          // Grid levels are rounded products, so the strict bound carries 1e-12 relative slack.
          EXPECT_GT(v2, (1 - p.delta) * v * (1 - 1e-12));
        } else {
          EXPECT_EQ(v2, 0.0);
        }
      }
    }
    EXPECT_LE(delta_bound(d, out.dist, out.coupling, DeltaMode::kExactEnumerate),
              delta_bound(d, out.dist, out.coupling, DeltaMode::kAnalytic, p) + 1e-12);
  }
}

TEST(ProbDiscretize, Examples) {
  DiscretizationParams p{0.5, 1.0, 1.0, 1, 1};
  ProductDistribution half = make_product({{0.0, 1.0}}, {{0.5, 0.5}}, 1);
  EXPECT_EQ(prob_discretize(half, p).dist, half);

  ProductDistribution d = make_product({{0.0, 1.0}}, {{0.7, 0.3}}, 1);
  Discretized out = prob_discretize(d, p);
  EXPECT_EQ(out.dist.marginals[0].probs(), (std::vector<double>{0.75, 0.25}));
  validate_coupling(d, out.dist, out.coupling);

  DiscretizationParams wide{0.5, 1.0, 1.0, 1, 10};
  ProductDistribution tiny = make_product({{0.0, 1.0}}, {{1 - 1e-9, 1e-9}}, 1);
  Discretized t = prob_discretize(tiny, wide);
  EXPECT_EQ(t.dist.marginals[0].values(), std::vector<double>{0.0});
}

TEST(ProbDiscretize, ProbabilityInvariants) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    ProductDistribution d = testing::random_product(rng, n, 5, n, 5.0);
    DiscretizationParams p{uniform(rng, 0.05, 0.9), 1.0, 1.0, n, n};
    Discretized out = prob_discretize(d, p);
    validate_coupling(d, out.dist, out.coupling);
    for (int i = 0; i < n; ++i) {
      const Marginal& src = d.marginals[i];
      const Marginal& dst = out.dist.marginals[i];
      double total = 0.0;
      for (double q : dst.probs()) total += q;
      EXPECT_NEAR(total, 1.0, 1e-12);
      for (std::size_t a = 0; a < src.size(); ++a) {
        const double v = src.values()[a];
        if (v == 0.0) continue;
        const double q = src.probs()[a];
        double q2 = 0.0;
        for (std::size_t b = 0; b < dst.size(); ++b) {
          if (dst.values()[b] == v) q2 = dst.probs()[b];
        }
        if (q2 > 0.0) {
          EXPECT_LE(q2, q);
          EXPECT_GT(q2, (1 - p.delta) * q);
          const double e = std::log(q2) / std::log(1 - p.delta);
          EXPECT_NEAR(e, std::round(e), 1e-9);
        }
      }
    }
  }
}

TEST(DeltaBound, Examples) {
  std::mt19937_64 rng(73);
  ProductDistribution d = testing::random_product(rng, 3, 3, 2);
  EXPECT_EQ(delta_bound(d, d, Coupling::identity(d), DeltaMode::kExactEnumerate), 0.0);

  ProductDistribution one = make_product({{1.0}}, {{1.0}}, 1);
  ProductDistribution rounded = make_product({{0.9}}, {{1.0}}, 1);
  EXPECT_NEAR(delta_bound(one, rounded, Coupling::identity(one), DeltaMode::kExactEnumerate), 0.1, 1e-15);
}

TEST(DeltaBound, MatchesSetMaximization) {
  // Independent reference: maximize v(S) - v'(S) over every subset S.
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = uniform_int(rng, 1, 3);
    const int k = uniform_int(rng, 1, n);
    ProductDistribution d = testing::random_product(rng, n, 3, k);
    ProductDistribution d2 = testing::random_product(rng, n, 2, k);
    // Independent coupling: every source atom spreads over the target marginal.
    Coupling c;
    c.items.resize(n);
    for (int i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < d.marginals[i].size(); ++a) {
        std::vector<std::pair<int, double>> row;
        for (std::size_t b = 0; b < d2.marginals[i].size(); ++b) row.emplace_back(b, d2.marginals[i].probs()[b]);
        c.items[i].push_back(row);
      }
    }
    std::vector<std::vector<std::array<double, 3>>> atoms(n);
    for (int i = 0; i < n; ++i) atoms[i] = coupled_atoms(d.marginals[i], d2.marginals[i], c.items[i]);
    double expected = 0.0;
    std::vector<double> v(n), v2(n);
    std::function<void(int, double)> rec = [&](int i, double prob) {
      if (i == n) {
        double up = 0.0, down = 0.0;
        for (int mask = 0; mask < (1 << n); ++mask) {
          std::vector<int> s;
          for (int j = 0; j < n; ++j) {
            if (mask >> j & 1) s.push_back(j);
          }
          up = std::max(up, value_of_set(v, s, k) - value_of_set(v2, s, k));
          down = std::max(down, value_of_set(v2, s, k) - value_of_set(v, s, k));
        }
        expected += prob * (up + down);
        return;
      }
      for (const auto& [a, b, p] : atoms[i]) {
        v[i] = a;
        v2[i] = b;
        rec(i + 1, prob * p);
      }
    };
    rec(0, 1.0);
    EXPECT_NEAR(delta_bound(d, d2, c, DeltaMode::kExactEnumerate), expected, 1e-12);
  }
}

TEST(DeltaM, IdentityIsZero) {
  std::mt19937_64 rng(83);
  ProductDistribution d = testing::random_product(rng, 3, 3, 3);
  SymmetricMenu m = testing::random_trivial_menu(rng, 3, 3, 3, 4.0);
  EXPECT_EQ(delta_m(d, d, Coupling::identity(d), m).value, 0.0);
}

TEST(DeltaM, CarefulCouplingTermAgreesWithSampling) {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    ProductDistribution d = testing::random_product(rng, 1, 4, 1, 4.0, false);
    DiscretizationParams p{0.3, 1.0, 1.0, 1, 1};
    Discretized out = prob_discretize(d, p);
    SymmetricMenu m = testing::random_trivial_menu(rng, 1, 1, 0, 1.0);
    m.components[0].options.push_back(MenuOption{{1.0}, 0.0});
    const double closed = delta_m(d, out.dist, out.coupling, m).value;

    std::mt19937_64 draw(trial);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MeanAccumulator acc;
    const auto atoms = coupled_atoms(d.marginals[0], out.dist.marginals[0], out.coupling.items[0]);
    for (int s = 0; s < 100'000; ++s) {
      double r = u(draw);
      std::size_t j = 0;
      while (j + 1 < atoms.size() && r >= atoms[j][2]) r -= atoms[j++][2];
      acc.add(atoms[j][0] - atoms[j][1]);
    }
    const Estimate e = acc.estimate();
    EXPECT_LE(std::abs(e.value - closed), 4 * e.std_error + 1e-12);
  }
}

TEST(DeltaM, MonteCarloModeAgreesWithExact) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 5; ++trial) {
    ProductDistribution d = testing::random_product(rng, 3, 3, 2, 4.0, false);
    Discretized out = full_discretize(d, params_for(d, 0.2));
    SymmetricMenu m = testing::random_trivial_menu(rng, 3, 2, 4, 3.0);
    const Estimate exact = delta_m(d, out.dist, out.coupling, m);
    DeltaMConfig cfg;
    cfg.monte_carlo = true;
    cfg.mc = {50'000, 3};
    const Estimate mc = delta_m(d, out.dist, out.coupling, m, cfg);
    EXPECT_FALSE(mc.exact);
    EXPECT_LE(std::abs(mc.value - exact.value), 4.5 * mc.std_error + 1e-12);
  }
}

TEST(Nudge, HoldsForOracleMenusOnDiscretizedCouples) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = uniform_int(rng, 1, 2);
    const int k = uniform_int(rng, 0, 1) ? 1 : n;
    ProductDistribution d = testing::random_product(rng, n, 3, k, 4.0, false);
    const double delta = uniform(rng, 0.1, 0.4) / k;
    Discretized out = full_discretize(d, params_for(d, delta));
    validate_coupling(d, out.dist, out.coupling);
    const SymmetricMenu m = brute_force_optimal(d, std::vector<double>(n, 0.0)).menu;
    const double dm = delta_m(d, out.dist, out.coupling, m).value;
    const double db = delta_bound(d, out.dist, out.coupling, DeltaMode::kExactEnumerate);
    EXPECT_LE(dm, db + 1e-12);
    for (double eps : {0.1, 0.3, 0.5}) {
      const double lhs = revenue_exact(scale_prices(m, 1 - eps), out.dist);
      const double base = (1 - eps) * revenue_exact(m, d);
      EXPECT_GE(lhs, base - dm / eps - 1e-9);
      EXPECT_GE(lhs, base - db / eps - 1e-9);
    }
  }
}

}  // namespace
}  // namespace menuforge
