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

#include "menuforge/barrier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "menuforge/error.hpp"
#include "menuforge/numeric.hpp"
#include "menuforge/parallel.hpp"

namespace menuforge {

namespace {

using Bits = std::vector<std::uint64_t>;

Bits to_bits(const std::vector<int>& ones, int k) {
  Bits b((k + 63) / 64, 0);
  for (int l : ones) b[l / 64] |= std::uint64_t{1} << (l % 64);
  return b;
}

// |{l : a_l = 1, b_l = 0}|
int ones_over(const Bits& a, const Bits& b) {
  int c = 0;
  for (std::size_t w = 0; w < a.size(); ++w) c += std::popcount(a[w] & ~b[w]);
  return c;
}

// First row of `rows` (each `words` long) sharing all but fewer than k/6 of
// cur's ones, or -1. Cloned for hardware popcount where the CPU has it.
#if defined(__GNUC__) && defined(__x86_64__)
__attribute__((target_clones("popcnt", "default")))
#endif
int first_close(const std::uint64_t* cur, const std::uint64_t* rows, int count, int words, int k, int hint) {
  auto close = [&](int j) {
    const std::uint64_t* row = rows + static_cast<std::size_t>(j) * words;
    int c = 0;
    for (int w = 0; w < words; ++w) c += std::popcount(cur[w] & ~row[w]);
    return 6 * c < k;
  };
  if (hint < count && close(hint)) return hint;
  for (int j = 0; j < count; ++j) {
    if (close(j)) return j;
  }
  return -1;
}

double grid_value(double eps, double log_n, int l) { return eps * std::pow(1.0 - eps, l) / log_n; }

}  // namespace

int barrier_k(int n, double eps) {
  const double log_n = std::log(static_cast<double>(n));
  const double raw = std::log(n / log_n) / eps + 1.0;
  return std::max(2, 2 * static_cast<int>(std::lround(raw / 2.0)));
}

BarrierInstance gen_barrier(int n, double eps, std::uint64_t seed, std::uint64_t max_retries,
                            std::optional<int> k_override) {
  require(n >= 64 && n % 2 == 0, ErrorCode::kInvalidArgument, "barrier needs an even n >= 64, got " + std::to_string(n));
  require(eps > 0.0 && eps < 1.0, ErrorCode::kInvalidArgument, "eps must lie in (0,1)");
  require(max_retries >= 1, ErrorCode::kInvalidArgument, "max_retries must be positive");
  const int k = k_override.value_or(barrier_k(n, eps));
  require(k >= 2 && k % 2 == 0, ErrorCode::kInvalidArgument, "k must be even and at least 2, got " + std::to_string(k));

  BarrierSpec spec;
  spec.n = n;
  spec.eps = eps;
  spec.seed = seed;
  spec.k = k;

  // All vectors have k/2 ones, so |r_i \ r_j| = |r_j \ r_i| and one
  // direction of the separation test suffices.
  std::mt19937_64 rng(seed);
  const int words = (k + 63) / 64;
  std::vector<int> positions(k);
  std::iota(positions.begin(), positions.end(), 0);
  std::vector<std::uint64_t> accepted;  // n rows of `words` words
  accepted.reserve(static_cast<std::size_t>(n) * words);
  Bits cur(words);
  // The vector that rejected the previous draw is tried first.
  int last_reject = 0;
  for (int i = 0; i < n; ++i) {
    bool ok = false;
    for (std::uint64_t attempt = 0; attempt < max_retries && !ok; ++attempt) {
      // Partial Fisher-Yates: the first k/2 positions form a uniform subset
      // whatever order the array was left in.
      std::fill(cur.begin(), cur.end(), 0);
      for (int t = 0; t < k / 2; ++t) {
        std::swap(positions[t], positions[std::uniform_int_distribution<int>(t, k - 1)(rng)]);
        cur[positions[t] / 64] |= std::uint64_t{1} << (positions[t] % 64);
      }
      ++spec.draws;
      const int j = first_close(cur.data(), accepted.data(), i, words, k, last_reject);
      if (j >= 0) last_reject = j;
      ok = j < 0;
    }
    require(ok, ErrorCode::kSeparationFailed,
            "vector " + std::to_string(i) + " found no separated draw in " + std::to_string(max_retries) +
                " attempts (k = " + std::to_string(k) + ")");
    accepted.insert(accepted.end(), cur.begin(), cur.end());
    std::vector<int> ones(positions.begin(), positions.begin() + k / 2);
    std::sort(ones.begin(), ones.end());
    spec.ones.push_back(std::move(ones));
  }

  const double log_n = std::log(static_cast<double>(n));
  std::vector<Marginal> marginals;
  marginals.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> values{i % 2 == 0 ? 1.0 : 0.5};
    std::vector<double> probs{i % 2 == 0 ? eps / n : 2.0 * eps / n};
    for (int l : spec.ones[i]) {
      values.push_back(grid_value(eps, log_n, l));
      probs.push_back(log_n * std::pow(1.0 - eps, -l) / (static_cast<double>(n) * k));
    }
    const double zero = 1.0 - exact_sum(probs);
    require(zero >= 0.0, ErrorCode::kNegativeMass,
            "item " + std::to_string(i) + " needs mass " + std::to_string(zero) +
                " at 0; (n, eps) = (" + std::to_string(n) + ", " + std::to_string(eps) + ") is invalid");
    values.push_back(0.0);
    probs.push_back(zero);
    marginals.emplace_back(std::move(values), std::move(probs));
  }
  return {make_product(std::move(marginals), n), std::move(spec)};
}

BarrierFeatures check_features(const ProductDistribution& d, const BarrierSpec& spec, const McConfig& mc) {
  require(d.n() == spec.n && static_cast<int>(spec.ones.size()) == spec.n, ErrorCode::kLengthMismatch,
          "distribution and barrier spec differ in item count");
  const int n = spec.n;
  const double eps = spec.eps;
  BarrierFeatures f;

  std::vector<double> means;
  for (const Marginal& m : d.marginals) means.push_back(m.mean());
  f.val = exact_sum(means);
  f.val_target = 1.5 * eps;
  f.val_ok = std::abs(f.val - f.val_target) <= 1e-9;

  std::vector<double> sales;
  for (int i = 0; i < n; ++i) {
    const double p = i % 2 == 0 ? 1.0 : 0.5;
    sales.push_back(p * d.marginals[i].prob_at_least(p));
  }
  f.separate_revenue = exact_sum(sales);
  f.separate_target = eps;
  f.separate_ok = std::abs(f.separate_revenue - f.separate_target) <= 1e-9;
  f.srev = srev(d).revenue;

  const double log_n = std::log(static_cast<double>(n));
  for (int j = 0; j < spec.k; ++j) {
    const double p = grid_value(eps, log_n, j);
    for (const Marginal& m : d.marginals) f.max_grid_revenue = std::max(f.max_grid_revenue, p * m.prob_at_least(p));
  }
  f.grid_bound = eps / n;
  f.grid_ok = f.max_grid_revenue <= f.grid_bound + 1e-12;

  for (const Marginal& m : d.marginals) f.max_value = std::max(f.max_value, m.max_value());
  f.values_bounded = f.max_value <= 1.0;

  f.masses_valid = true;
  f.min_zero_mass = 1.0;
  for (const Marginal& m : d.marginals) {
    const bool nonneg = std::all_of(m.probs().begin(), m.probs().end(), [](double p) { return p >= 0.0; });
    f.masses_valid = f.masses_valid && nonneg && std::abs(exact_sum(m.probs()) - 1.0) <= 1e-12;
    f.min_zero_mass = std::min(f.min_zero_mass, m.values().front() == 0.0 ? m.probs().front() : 0.0);
  }

  std::vector<Bits> bits;
  for (const auto& ones : spec.ones) bits.push_back(to_bits(ones, spec.k));
  f.min_separation = spec.k;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) f.min_separation = std::min(f.min_separation, ones_over(bits[i], bits[j]));
    }
  }
  f.separation_ok = 6 * f.min_separation >= spec.k;

  BrevConfig config;
  config.mc = mc;
  config.support_cap = 0;  // always sample; the joint support is astronomically large
  f.brev_in_sample = brev(d, config);
  const double price = f.brev_in_sample.price;
  const auto parts = map_chunks(mc.samples, 4096, [&](std::size_t b, std::size_t e) {
    MeanAccumulator acc;
    std::vector<double> v;
    for (std::size_t s = b; s < e; ++s) {
      sample_into(d, mc.seed + 1, s, v);
      acc.add(exact_sum(v) >= price ? price : 0.0);
    }
    return acc;
  });
  MeanAccumulator total;
  for (const MeanAccumulator& a : parts) total.merge(a);
  f.brev_holdout = total.estimate();
  return f;
}

}  // namespace menuforge
