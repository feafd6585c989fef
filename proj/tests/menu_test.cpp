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
#include <set>

#include "menuforge/error.hpp"
#include "menuforge/menu.hpp"
#include "support/generators.hpp"

namespace menuforge {
namespace {

using testing::expand_menu;
using testing::for_each_group_element;
using testing::naive_revenue;
using testing::uniform_int;

SymmetricMenu single_component(int n, std::vector<MenuOption> options, ItemGroup g) {
  SymmetricMenu m;
  m.n = n;
  m.components.push_back(SymmetricComponent{std::move(g), std::move(options)});
  return m;
}

SymmetricMenu trivial_menu(int n, std::vector<MenuOption> options) {
  return single_component(n, std::move(options), ItemGroup::trivial(n));
}

// Dyadic grid values keep every naive sum exact, so the brute force is an
// independent exact reference.
double brute_force_best(const std::vector<double>& v, const ItemGroup& g, const std::vector<double>& x,
                        double price) {
  double best = -INFINITY;
  for_each_group_element(g, [&](const std::vector<int>& sigma) {
    double u = -price;
    for (std::size_t i = 0; i < v.size(); ++i) u += v[sigma[i]] * x[i];
    best = std::max(best, u);
  });
  return best;
}

TEST(ItemGroup, ValidatesCover) {
  EXPECT_THROW(ItemGroup(3, {{0, 1}}), Error);
  EXPECT_THROW(ItemGroup(2, {{0, 1}, {1}}), Error);
  ItemGroup g(3, {{2, 0}, {1}});
  EXPECT_EQ(g.blocks()[0], (std::vector<int>{0, 2}));
  EXPECT_TRUE(g.same_partition(ItemGroup(3, {{1}, {0, 2}})));
  EXPECT_FALSE(g.same_partition(ItemGroup::trivial(3)));
}

TEST(OptionUtility, Examples) {
  EXPECT_DOUBLE_EQ(option_utility({1, 0}, {1, 0}, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(option_utility({1, 0}, {0, 0}, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(option_utility({2, 3}, {0.5, 0.5}, 1.0), 1.5);
}

TEST(BestSymmetricVariant, SwapWithinBlock) {
  Variant var = best_symmetric_variant({0, 1}, ItemGroup::full(2), {1, 0}, 0.25);
  EXPECT_EQ(var.x, (std::vector<double>{0, 1}));
  EXPECT_DOUBLE_EQ(var.utility, 0.75);
}

TEST(BestSymmetricVariant, SingletonBlocksKeepIdentity) {
  Variant var = best_symmetric_variant({0, 1}, ItemGroup::trivial(2), {1, 0}, 0.25);
  EXPECT_EQ(var.x, (std::vector<double>{1, 0}));
  EXPECT_DOUBLE_EQ(var.utility, option_utility({0, 1}, {1, 0}, 0.25));
}

TEST(BestSymmetricVariant, MatchesFactorialBruteForce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 1, 7);
    const ItemGroup g = testing::group_from_sizes(testing::random_block_sizes(rng, std::min(n, 5)));
    const int m = g.n();
    std::vector<double> v(m), x(m);
    for (double& a : v) a = 0.125 * uniform_int(rng, 0, 40);
    for (double& a : x) a = 0.25 * uniform_int(rng, 0, 4);
    const double price = 0.125 * uniform_int(rng, 0, 40);
    const Variant var = best_symmetric_variant(v, g, x, price);
    EXPECT_EQ(var.utility, brute_force_best(v, g, x, price));
    EXPECT_EQ(var.utility, option_utility(v, var.x, price));
  }
}

TEST(Choose, Examples) {
  const BuyerChoice empty = choose({1.0}, trivial_menu(1, {}));
  EXPECT_TRUE(empty.is_null());
  EXPECT_EQ(empty.price, 0.0);
  EXPECT_EQ(empty.utility, 0.0);

  const BuyerChoice cheap = choose({2.0}, trivial_menu(1, {{{1}, 1.0}, {{1}, 1.5}}));
  EXPECT_EQ(cheap.price, 1.0);
  EXPECT_EQ(cheap.option, 0);

  const BuyerChoice tie = choose({2.0}, trivial_menu(1, {{{1}, 2.0}}));
  EXPECT_FALSE(tie.is_null());
  EXPECT_EQ(tie.price, 2.0);
}

TEST(Choose, TiesFavorPriceThenIndex) {
  // Both give utility 1: the dearer one wins.
  SymmetricMenu m = trivial_menu(2, {{{1, 0}, 1.0}, {{1, 1}, 2.0}});
  EXPECT_EQ(choose({2.0, 1.0}, m).option, 1);
  // Identical options: the first wins.
  SymmetricMenu dup = trivial_menu(1, {{{1}, 1.0}, {{1}, 1.0}});
  EXPECT_EQ(choose({2.0}, dup).option, 0);
}

TEST(Choose, UtilityInvariants) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    const int k = uniform_int(rng, 1, n);
    const ItemGroup g = testing::group_from_sizes(testing::random_block_sizes(rng, n));
    SymmetricMenu m = testing::random_trivial_menu(rng, n, k, uniform_int(rng, 0, 5), 4.0);
    m.components[0].group = g;
    std::vector<double> v(n);
    for (double& a : v) a = 0.5 * uniform_int(rng, 0, 8);
    const BuyerChoice c = choose(v, m);
    const double tol = tie_tolerance(v);
    EXPECT_GE(c.utility, -tol);
    for (const MenuOption& o : m.components[0].options) EXPECT_GE(c.utility, option_utility(v, o.x, o.price) - tol);
    EXPECT_EQ(c.utility, option_utility(v, c.x, c.price));
    EXPECT_EQ(PreparedMenu(m).price_paid(v), c.price);
  }
}

TEST(RevenueExact, Examples) {
  ProductDistribution one = make_product({{1.0}}, {{1.0}}, 1);
  EXPECT_DOUBLE_EQ(revenue_exact(trivial_menu(1, {{{1}, 1.0}}), one), 1.0);

  ProductDistribution d = make_product({{1, 2}, {1, 2}}, {{0.5, 0.5}, {0.5, 0.5}}, 1);
  SymmetricMenu excl = trivial_menu(2, {{{1, 0}, 2.0}, {{0, 1}, 2.0}});
  EXPECT_DOUBLE_EQ(revenue_exact(excl, d), 1.5);

  ProductDistribution pm = make_product({{3.0}, {1.0}}, {{1.0}, {1.0}}, 2);
  SymmetricMenu m = trivial_menu(2, {{{1, 0}, 2.0}, {{1, 1}, 3.5}});
  EXPECT_DOUBLE_EQ(revenue_exact(m, pm), choose({3.0, 1.0}, m).price);
}

TEST(RevenueExact, MatchesExpandedMenuOracle) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    const int k = uniform_int(rng, 1, n);
    const ItemGroup g = testing::group_from_sizes(testing::random_block_sizes(rng, n));
    SymmetricMenu m = testing::random_trivial_menu(rng, n, k, uniform_int(rng, 1, 4), 4.0);
    m.components[0].group = g;
    SymmetricComponent extra{ItemGroup::trivial(n), {testing::random_option(rng, n, k, 4.0)}};
    m.components.push_back(extra);
    ProductDistribution d = testing::random_product(rng, n, 3, k);
    EXPECT_NEAR(revenue_exact(m, d), naive_revenue(expand_menu(m), d), 1e-12);
  }
}

TEST(RevenueMc, PointMassIsExactAndSeedsRepeat) {
  ProductDistribution pm = make_product({{2.0}}, {{1.0}}, 1);
  SymmetricMenu m = trivial_menu(1, {{{1}, 1.5}});
  const Estimate e = revenue_mc(m, pm, {1000, 1});
  EXPECT_EQ(e.value, 1.5);
  EXPECT_EQ(e.std_error, 0.0);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = uniform_int(rng, 1, 3);
    ProductDistribution d = testing::random_product(rng, n, 3, n);
    SymmetricMenu mm = testing::random_trivial_menu(rng, n, n, 3, 4.0);
    const Estimate a = revenue_mc(mm, d, {20'000, 77});
    const Estimate b = revenue_mc(mm, d, {20'000, 77});
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_LE(std::abs(a.value - revenue_exact(mm, d)), 4.5 * a.std_error + 1e-12);
  }
}

TEST(Leftovers, Examples) {
  EXPECT_EQ(leftovers(trivial_menu(2, {{{1, 0}, 1.0}})), (std::vector<double>{0, 1}));
  EXPECT_EQ(leftovers(single_component(2, {{{1, 0}, 1.0}}, ItemGroup::full(2))), (std::vector<double>{0, 0}));
  EXPECT_EQ(leftovers(trivial_menu(2, {})), (std::vector<double>{1, 1}));
}

TEST(Leftovers, UnchangedByDominatedOption) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    SymmetricMenu m = testing::random_trivial_menu(rng, n, n, uniform_int(rng, 1, 4), 4.0);
    const std::vector<double> before = leftovers(m);
    for (double l : before) {
      EXPECT_GE(l, 0.0);
      EXPECT_LE(l, 1.0);
    }
    MenuOption dominated = m.components[0].options[0];
    for (double& x : dominated.x) x *= 0.5;
    dominated.price += 1.0;
    m.components[0].options.push_back(dominated);
    EXPECT_EQ(leftovers(m), before);
  }
}

TEST(ModRevObjective, Examples) {
  ProductDistribution d = make_product({{1.0}, {0.0}}, {{1.0}, {1.0}}, 2);
  EXPECT_DOUBLE_EQ(modrev_objective(trivial_menu(2, {}), d, {3, 4}), 7.0);
  SymmetricMenu m = trivial_menu(2, {{{1, 0}, 0.5}});
  EXPECT_DOUBLE_EQ(modrev_objective(m, d, {0, 0}), revenue_exact(m, d));

  ProductDistribution one = make_product({{1.0}}, {{1.0}}, 1);
  EXPECT_DOUBLE_EQ(modrev_objective(trivial_menu(1, {{{1}, 1.0}}), one, {10}), 1.0);
  EXPECT_DOUBLE_EQ(modrev_objective(trivial_menu(1, {}), one, {10}), 10.0);
}

TEST(ScalePrices, Examples) {
  SymmetricMenu m = trivial_menu(1, {{{1}, 2.0}});
  EXPECT_EQ(scale_prices(m, 1.0), m);
  EXPECT_DOUBLE_EQ(scale_prices(m, 0.9).components[0].options[0].price, 1.8);
  const double composed = scale_prices(scale_prices(m, 0.5), 0.25).components[0].options[0].price;
  EXPECT_DOUBLE_EQ(composed, scale_prices(m, 0.125).components[0].options[0].price);
  EXPECT_THROW(scale_prices(m, 1.5), Error);
}

TEST(MakeExclusive, Examples) {
  SymmetricMenu m = trivial_menu(2, {{{1, 1}, 10.0}});
  SymmetricMenu out = make_exclusive(m, 5.0, 0.1);
  std::vector<MenuOption> concrete = expand_menu(out);
  ASSERT_EQ(concrete.size(), 2u);
  std::set<std::vector<double>> xs;
  for (const MenuOption& o : concrete) {
    EXPECT_DOUBLE_EQ(o.price, 9.0);
    xs.insert(o.x);
  }
  EXPECT_EQ(xs, (std::set<std::vector<double>>{{1, 0}, {0, 1}}));

  SymmetricMenu cheap = make_exclusive(trivial_menu(2, {{{1, 1}, 4.0}}), 5.0, 0.1);
  EXPECT_EQ(cheap.components[0].options[0].x, (std::vector<double>{1, 1}));
  EXPECT_DOUBLE_EQ(cheap.components[0].options[0].price, 3.6);
  EXPECT_TRUE(make_exclusive(trivial_menu(2, {}), 5.0, 0.1).components.empty());
}

TEST(MakeExclusive, ExpensiveOptionsAwardOneItem) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    const ItemGroup g = testing::group_from_sizes(testing::random_block_sizes(rng, n));
    SymmetricMenu m = testing::random_trivial_menu(rng, n, n, uniform_int(rng, 1, 5), 8.0);
    m.components[0].group = g;
    const double e = testing::uniform(rng, 0.5, 6.0);
    const double eps = 0.2;
    SymmetricMenu out = make_exclusive(m, e, eps);
    for (const SymmetricComponent& c : out.components) EXPECT_EQ(c.group, g);
    for (const MenuOption& o : expand_menu(out)) {
      if (o.price > (1 - eps) * e) {
        int positive = 0;
        for (double x : o.x) positive += x > 0;
        EXPECT_LE(positive, 1);
      }
    }
    // Every concrete expensive single-item lottery of the input survives.
    std::set<std::pair<double, std::vector<double>>> produced;
    for (const MenuOption& o : expand_menu(out)) produced.insert({o.price, o.x});
    for (const MenuOption& o : expand_menu(m)) {
      if (o.price <= e) {
        EXPECT_TRUE(produced.count({o.price * (1 - eps), o.x}));
        continue;
      }
      for (int i = 0; i < n; ++i) {
        if (o.x[i] <= 0) continue;
        std::vector<double> single(n, 0.0);
        single[i] = o.x[i];
        EXPECT_TRUE(produced.count({o.price * (1 - eps), single}));
      }
    }
  }
}

TEST(ConcatExclusive, Examples) {
  SymmetricMenu out = concat_exclusive(SymmetricMenu{1, {}}, 100.0, {5.0}, 0.1);
  ASSERT_EQ(out.components.size(), 1u);
  EXPECT_EQ(out.components[0].options[0].x, std::vector<double>{1.0});
  EXPECT_DOUBLE_EQ(out.components[0].options[0].price, 4.5);

  SymmetricMenu m = trivial_menu(1, {{{0.4}, 2.0}});
  SymmetricMenu with = concat_exclusive(m, 100.0, {50.0}, 0.1);
  ASSERT_EQ(with.components.size(), 2u);
  EXPECT_DOUBLE_EQ(with.components[0].options[0].price, 1.8);
  EXPECT_DOUBLE_EQ(with.components[1].options[0].price, 0.9 * (2.0 + 0.6 * 50.0));

  SymmetricMenu none = concat_exclusive(m, 100.0, {std::nullopt}, 0.1);
  EXPECT_EQ(none, scale_prices(m, 0.9));
}

TEST(PruneDominated, Examples) {
  SymmetricMenu m = trivial_menu(1, {{{1.0}, 2.0}, {{0.5}, 1.5}});
  SymmetricMenu out = prune_dominated(m);
  ASSERT_EQ(out.option_count(), 1u);
  EXPECT_EQ(out.components[0].options[0].price, 2.0);

  SymmetricMenu dup = trivial_menu(2, {{{0, 0.5}, 1.0}, {{0, 0.5}, 1.0}});
  EXPECT_EQ(prune_dominated(dup).option_count(), 1u);

  SymmetricMenu keep = trivial_menu(2, {{{1, 0}, 1.0}, {{0, 1}, 1.0}});
  EXPECT_EQ(prune_dominated(keep).option_count(), 2u);
}

TEST(PruneDominated, RevenueUnchanged) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(rng, 1, 3);
    const int k = uniform_int(rng, 1, n);
    SymmetricMenu m;
    m.n = n;
    const int comps = uniform_int(rng, 1, 2);
    for (int c = 0; c < comps; ++c) {
      SymmetricComponent comp{testing::group_from_sizes(testing::random_block_sizes(rng, n)), {}};
      const int count = uniform_int(rng, 1, 5);
      for (int o = 0; o < count; ++o) comp.options.push_back(testing::random_single_item_option(rng, n, 4.0));
      m.components.push_back(comp);
    }
    ProductDistribution d = testing::random_product(rng, n, 3, k);
    const SymmetricMenu pruned = prune_dominated(m);
    EXPECT_LE(pruned.option_count(), m.option_count());
    EXPECT_NEAR(revenue_exact(pruned, d), revenue_exact(m, d), 1e-12);
  }
}

TEST(Complexity, Examples) {
  SymmetricMenu m = trivial_menu(2, {{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{1, 1}, 1.5}});
  ComplexityReport r = complexity_measures(m);
  EXPECT_EQ(r.mc, BigCount::of(3));
  EXPECT_EQ(r.declared_ssmc, BigCount::of(3));
  EXPECT_EQ(r.declared_wsmc, 3u);

  SymmetricMenu mixed = m;
  mixed.components.push_back(SymmetricComponent{ItemGroup::full(2), {{{1, 0}, 1.0}}});
  r = complexity_measures(mixed);
  EXPECT_TRUE(r.declared_ssmc.overflow);
  EXPECT_EQ(r.declared_wsmc, 4u);
  EXPECT_EQ(r.mc, BigCount::of(3));
}

TEST(Complexity, OrbitSizeMatchesEnumeration) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 1, 6);
    const ItemGroup g = testing::group_from_sizes(testing::random_block_sizes(rng, n));
    std::vector<double> x(n);
    for (double& a : x) a = 0.25 * uniform_int(rng, 0, 3);
    std::set<std::vector<double>> orbit;
    for_each_group_element(g, [&](const std::vector<int>& sigma) {
      std::vector<double> y(n);
      for (int i = 0; i < n; ++i) y[sigma[i]] = x[i];
      orbit.insert(y);
    });
    EXPECT_EQ(orbit_size(g, x), BigCount::of(orbit.size()));

    SymmetricMenu m = single_component(n, {{x, 1.0}, {x, 2.0}}, g);
    m.components.push_back(SymmetricComponent{ItemGroup::trivial(n), {{x, 1.0}}});
    EXPECT_EQ(complexity_measures(m).mc, BigCount::of(2 * orbit.size()));
  }
}

TEST(Complexity, LargeOrbitsSaturate) {
  std::vector<double> x(70, 0.0);
  for (int i = 0; i < 35; ++i) x[i] = 1.0 / 35;
  EXPECT_TRUE(orbit_size(ItemGroup::full(70), x).overflow);
}

}  // namespace
}  // namespace menuforge
