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

#include "menuforge/barrier.hpp"
#include "menuforge/error.hpp"
#include "support/generators.hpp"

namespace menuforge {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(BarrierK, RoundsToNearestEven) {
  // ln(1000 / ln 1000) * 9 + 1 = 45.78
  EXPECT_EQ(barrier_k(1000, 1.0 / 9), 46);
  // ln(64 / ln 64) * 2 + 1 = 6.47
  EXPECT_EQ(barrier_k(64, 0.5), 6);
  EXPECT_GE(barrier_k(64, 0.999), 2);
}

TEST(GenBarrier, ThousandItemConstants) {
  const double eps = 1.0 / 9;
  const BarrierInstance inst = gen_barrier(1000, eps, 1);
  const BarrierSpec& s = inst.spec;
  ASSERT_EQ(s.k, 46);
  for (int i = 0; i < 1000; ++i) {
    const Marginal& m = inst.dist.marginals[i];
    // k/2 grid atoms, the large atom and the zero atom.
    ASSERT_EQ(m.size(), static_cast<std::size_t>(s.k / 2 + 2));
    EXPECT_EQ(m.values().front(), 0.0);
    EXPECT_GE(m.probs().front(), 0.0);
    EXPECT_EQ(m.max_value(), i % 2 == 0 ? 1.0 : 0.5);
  }
  const BarrierFeatures f = check_features(inst.dist, s, McConfig{20000, 5});
  EXPECT_NEAR(f.val, 1.5 * eps, 1e-9);
  EXPECT_NEAR(f.separate_revenue, eps, 1e-9);
  EXPECT_LE(f.max_grid_revenue, eps / 1000 + 1e-12);
  EXPECT_TRUE(f.exact_checks_ok());
  EXPECT_EQ(f.max_value, 1.0);
  // With every grid price below eps/n per item, the per-item monopoly prices
  // are the large atoms and selling separately earns exactly eps.
  EXPECT_NEAR(f.srev, eps, 1e-9);
  EXPECT_GT(f.brev_holdout.std_error, 0.0);
}

// Pr[v_i >= p] recomputed from the BarrierSpec, without the Marginal class.
double tail(const BarrierSpec& s, int i, double p) {
  const double log_n = std::log(static_cast<double>(s.n));
  double mass = 0.0;
  if ((i % 2 == 0 ? 1.0 : 0.5) >= p) mass += (i % 2 == 0 ? 1.0 : 2.0) * s.eps / s.n;
  for (int l : s.ones[i]) {
    if (s.eps * std::pow(1 - s.eps, l) / log_n >= p) mass += log_n * std::pow(1 - s.eps, -l) / (s.n * s.k);
  }
  return mass;
}

TEST(GenBarrier, PropertiesOnSmallInstances) {
  // Small eps keeps k large enough for separated vectors to exist; with
  // n = 64 and eps = 0.3, k = 10 and no 64 such vectors exist.
  std::mt19937_64 rng(601);
  int built = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 * testing::uniform_int(rng, 32, 100);
    const double eps = testing::uniform(rng, 0.06, 0.1);
    BarrierInstance inst;
    try {
      inst = gen_barrier(n, eps, trial);
    } catch (const Error& e) {
      ADD_FAILURE() << "n=" << n << " eps=" << eps << ": " << e.what();
      continue;
    }
    ++built;
    const BarrierSpec& s = inst.spec;
    SCOPED_TRACE("n=" + std::to_string(n) + " eps=" + std::to_string(eps));
    ASSERT_EQ(s.k % 2, 0);
    std::vector<std::set<int>> sets;
    for (const auto& ones : s.ones) {
      ASSERT_EQ(static_cast<int>(ones.size()), s.k / 2);
      sets.emplace_back(ones.begin(), ones.end());
      EXPECT_EQ(sets.back().size(), ones.size());
      EXPECT_GE(*sets.back().begin(), 0);
      EXPECT_LT(*sets.back().rbegin(), s.k);
    }
    int min_sep = s.k;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        int c = 0;
        for (int l : sets[i]) c += sets[j].count(l) == 0;
        min_sep = std::min(min_sep, c);
      }
    }
    EXPECT_GE(6 * min_sep, s.k);

    const BarrierFeatures f = check_features(inst.dist, s, McConfig{2000, 1});
    EXPECT_EQ(f.min_separation, min_sep);
    EXPECT_TRUE(f.val_ok) << f.val;
    EXPECT_TRUE(f.separate_ok) << f.separate_revenue;
    EXPECT_TRUE(f.masses_valid);
    const double log_n = std::log(static_cast<double>(n));
    double grid = 0.0;
    for (int j = 0; j < s.k; ++j) {
      const double p = eps * std::pow(1 - eps, j) / log_n;
      for (int i = 0; i < n; ++i) grid = std::max(grid, p * tail(s, i, p));
    }
    EXPECT_NEAR(f.max_grid_revenue, grid, 1e-15);
  }
  EXPECT_GE(built, 10);
}

TEST(GenBarrier, DeterministicUnderSeed) {
  const BarrierInstance a = gen_barrier(64, 0.1, 11);
  const BarrierInstance b = gen_barrier(64, 0.1, 11);
  const BarrierInstance c = gen_barrier(64, 0.1, 12);
  EXPECT_EQ(a.spec.ones, b.spec.ones);
  EXPECT_EQ(a.dist, b.dist);
  EXPECT_NE(a.spec.ones, c.spec.ones);
}

TEST(GenBarrier, KOverride) {
  const BarrierInstance inst = gen_barrier(64, 0.1, 1, 100000, 30);  // default k is 28
  EXPECT_EQ(inst.spec.k, 30);
  EXPECT_NEAR(check_features(inst.dist, inst.spec, McConfig{1000, 1}).val, 0.15, 1e-12);
}

TEST(GenBarrier, Errors) {
  EXPECT_EQ(code_of([] { gen_barrier(65, 0.1, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { gen_barrier(62, 0.1, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { gen_barrier(64, 1.0, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { gen_barrier(64, 0.1, 1, 100, 7); }), ErrorCode::kInvalidArgument);
  // k = 2 allows only two distinct weight-one vectors.
  EXPECT_EQ(code_of([] { gen_barrier(64, 0.1, 1, 50, 2); }), ErrorCode::kSeparationFailed);
  // (1 - 0.9)^-l for l up to 39 puts far more than probability 1 on the grid.
  EXPECT_EQ(code_of([] { gen_barrier(64, 0.9, 1, 100000, 40); }), ErrorCode::kNegativeMass);
}

}  // namespace
}  // namespace menuforge
