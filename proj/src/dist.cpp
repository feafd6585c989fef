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

#include "menuforge/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "menuforge/error.hpp"
#include "menuforge/parallel.hpp"

namespace menuforge {

namespace {

constexpr double kProbSumTol = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Marginal::Marginal(std::vector<double> values, std::vector<double> probs) {
  require(values.size() == probs.size(), ErrorCode::kLengthMismatch,
          "values and probs have different lengths (" + std::to_string(values.size()) + " vs " +
              std::to_string(probs.size()) + ")");
  require(!values.empty(), ErrorCode::kInvalidMarginal, "marginal has no atoms");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(std::isfinite(values[i]) && values[i] >= 0.0, ErrorCode::kInvalidMarginal,
            "atom value must be finite and non-negative");
    require(std::isfinite(probs[i]) && probs[i] >= 0.0 && probs[i] <= 1.0,
            ErrorCode::kInvalidMarginal, "atom probability must lie in [0,1]");
  }
  const double total = exact_sum(probs);
  require(std::abs(total - 1.0) <= kProbSumTol, ErrorCode::kInvalidMarginal,
          "probabilities sum to " + std::to_string(total) + ", not 1");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  for (std::size_t idx : order) {
    if (probs[idx] == 0.0) continue;
    if (!values_.empty() && values_.back() == values[idx]) {
      probs_.back() += probs[idx];
    } else {
      values_.push_back(values[idx]);
      probs_.push_back(probs[idx]);
    }
  }
  require(!values_.empty(), ErrorCode::kInvalidMarginal, "marginal has no positive-mass atom");
  cdf_.resize(probs_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    run += probs_[i];
    cdf_[i] = run;
  }
}

Marginal Marginal::point_mass(double value) { return Marginal({value}, {1.0}); }

double Marginal::mean() const {
  return exact_dot_minus(values_.data(), probs_.data(), values_.size(), 0.0);
}

double Marginal::prob_at_least(double p) const {
  const auto it = std::lower_bound(values_.begin(), values_.end(), p);
  const std::size_t first = static_cast<std::size_t>(it - values_.begin());
  return exact_sum(probs_.data() + first, probs_.size() - first);
}

double Marginal::prob_below(double p) const {
  const auto it = std::lower_bound(values_.begin(), values_.end(), p);
  return exact_sum(probs_.data(), static_cast<std::size_t>(it - values_.begin()));
}

std::size_t Marginal::quantile_index(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  return std::min(i, cdf_.size() - 1);
}

ProductDistribution make_product(std::vector<Marginal> marginals, int k) {
  require(!marginals.empty(), ErrorCode::kInvalidArgument, "distribution needs at least one item");
  const int n = static_cast<int>(marginals.size());
  require(k >= 1 && k <= n, ErrorCode::kInvalidK,
          "k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  return ProductDistribution{std::move(marginals), k};
}

ProductDistribution make_product(const std::vector<std::vector<double>>& values,
                                 const std::vector<std::vector<double>>& probs, int k) {
  require(values.size() == probs.size(), ErrorCode::kLengthMismatch,
          "values and probs lists differ in item count");
  std::vector<Marginal> marginals;
  marginals.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    try {
      marginals.emplace_back(values[i], probs[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "marginal " + std::to_string(i) + ": " + e.what());
    }
  }
  return make_product(std::move(marginals), k);
}

double value_of_set(const std::vector<double>& v, const std::vector<int>& items, int k) {
  std::vector<double> vals;
  vals.reserve(items.size());
  for (int i : items) vals.push_back(v[i]);
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), vals.size());
  std::partial_sort(vals.begin(), vals.begin() + take, vals.end(), std::greater<>());
  return exact_sum(vals.data(), take);
}

double value_of_all(const std::vector<double>& v, int k) {
  std::vector<int> items(v.size());
  std::iota(items.begin(), items.end(), 0);
  return value_of_set(v, items, k);
}

TruncationMode truncation_mode_for(const ProductDistribution& d) {
  return d.unit_demand() ? TruncationMode::kMax : TruncationMode::kAdditive;
}

ProductDistribution truncate(const ProductDistribution& d, double t, const std::vector<double>& p,
                             TruncationMode mode) {
  const int n = d.n();
  require(t > 0.0 && std::isfinite(t), ErrorCode::kInvalidArgument, "truncation level must be positive");
  require(static_cast<int>(p.size()) == n, ErrorCode::kLengthMismatch,
          "tail revenue vector length differs from item count");
  if (mode == TruncationMode::kMax) {
    require(d.k == 1, ErrorCode::kModeClassMismatch, "max truncation requires unit demand");
  } else {
    require(d.k > 1 || n == 1, ErrorCode::kModeClassMismatch,
            "additive truncation requires k > 1 (or a single item)");
  }
  const double big = static_cast<double>(n) * n * std::pow(std::max(1.0, t), 3);
  std::vector<Marginal> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    require(p[i] >= 0.0 && std::isfinite(p[i]), ErrorCode::kInvalidArgument,
            "tail revenue must be non-negative");
    const double q = std::min(p[i] / big, 1.0);
    const Marginal& m = d.marginals[i];
    std::vector<double> values;
    std::vector<double> probs;
    for (std::size_t a = 0; a < m.size(); ++a) {
      values.push_back(std::min(m.values()[a], t));
      probs.push_back(m.probs()[a] * (1.0 - q));
    }
    if (q > 0.0) {
      values.push_back(big);
      probs.push_back(q);
    }
    out.emplace_back(std::move(values), std::move(probs));
  }
  return ProductDistribution{std::move(out), d.k};
}

BigCount support_size(const ProductDistribution& d) {
  BigCount c = BigCount::of(1);
  for (const Marginal& m : d.marginals) c = c * BigCount::of(m.size());
  return c;
}

void enumerate_support_range(const ProductDistribution& d, std::uint64_t begin, std::uint64_t end,
                             const std::function<void(const std::vector<double>&, double)>& fn) {
  const int n = d.n();
  if (begin >= end) return;
  std::vector<std::size_t> digit(n);
  std::uint64_t rest = begin;
  for (int i = n - 1; i >= 0; --i) {
    const std::uint64_t radix = d.marginals[i].size();
    digit[i] = static_cast<std::size_t>(rest % radix);
    rest /= radix;
  }
  std::vector<double> v(n);
  // prefix[i] = product of the first i atom probabilities.
  std::vector<double> prefix(n + 1, 1.0);
  auto refresh = [&](int from) {
    for (int i = from; i < n; ++i) {
      v[i] = d.marginals[i].values()[digit[i]];
      prefix[i + 1] = prefix[i] * d.marginals[i].probs()[digit[i]];
    }
  };
  refresh(0);
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    fn(v, prefix[n]);
    int i = n - 1;
    while (i >= 0 && ++digit[i] == d.marginals[i].size()) {
      digit[i] = 0;
      --i;
    }
    if (i < 0) break;
    refresh(i);
  }
}

void enumerate_support(const ProductDistribution& d,
                       const std::function<void(const std::vector<double>&, double)>& fn,
                       std::uint64_t cap) {
  const BigCount size = support_size(d);
  require(size.fits(cap), ErrorCode::kSupportTooLarge,
          "joint support exceeds the enumeration cap of " + std::to_string(cap) + " points");
  enumerate_support_range(d, 0, size.value, fn);
}

void sample_into(const ProductDistribution& d, std::uint64_t seed, std::uint64_t index,
                 std::vector<double>& out) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
  out.resize(d.n());
  for (int i = 0; i < d.n(); ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const Marginal& m = d.marginals[i];
    out[i] = m.values()[m.quantile_index(u)];
  }
}

std::vector<double> sample(const ProductDistribution& d, std::uint64_t seed, std::uint64_t index) {
  std::vector<double> out;
  sample_into(d, seed, index, out);
  return out;
}

void MeanAccumulator::add(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void MeanAccumulator::merge(const MeanAccumulator& o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(o.count);
  const double delta = o.mean - mean;
  const double total = na + nb;
  mean += delta * nb / total;
  m2 += o.m2 + delta * delta * na * nb / total;
  count += o.count;
}

Estimate MeanAccumulator::estimate() const {
  Estimate e;
  e.exact = false;
  e.value = mean;
  if (count >= 2) {
    const double var = std::max(0.0, m2 / static_cast<double>(count - 1));
    e.std_error = std::sqrt(var / static_cast<double>(count));
  }
  return e;
}

Estimate val_expectation(const ProductDistribution& d, ExpectationMode mode, const McConfig& mc,
                         std::uint64_t cap) {
  if (mode == ExpectationMode::kExact) {
    if (d.additive()) {
      std::vector<double> means;
      for (const Marginal& m : d.marginals) means.push_back(m.mean());
      return Estimate{exact_sum(means), 0.0, true};
    }
    std::vector<double> terms;
    enumerate_support(d, [&](const std::vector<double>& v, double prob) {
      terms.push_back(prob * value_of_all(v, d.k));
    }, cap);
    return Estimate{exact_sum(terms), 0.0, true};
  }
  require(mc.samples >= 2, ErrorCode::kInvalidArgument, "Monte Carlo needs at least 2 samples");
  const auto parts = map_chunks(mc.samples, 4096, [&](std::size_t b, std::size_t e) {
    MeanAccumulator acc;
    std::vector<double> v;
    for (std::size_t s = b; s < e; ++s) {
      sample_into(d, mc.seed, s, v);
      acc.add(value_of_all(v, d.k));
    }
    return acc;
  });
  MeanAccumulator total;
  for (const MeanAccumulator& a : parts) total.merge(a);
  return total.estimate();
}

}  // namespace menuforge
