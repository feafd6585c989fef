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
#include <functional>
#include <vector>

#include "menuforge/numeric.hpp"

namespace menuforge {

inline constexpr std::uint64_t kDefaultSupportCap = 10'000'000;

// A finite discrete distribution over non-negative values. Construction sorts
// the atoms, merges equal values and drops zero-mass atoms.
class Marginal {
 public:
  Marginal() = default;
  Marginal(std::vector<double> values, std::vector<double> probs);

  static Marginal point_mass(double value);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return values_.size(); }

  double max_value() const { return values_.back(); }
  double mean() const;
  // Pr[v >= p] and Pr[v < p].
  double prob_at_least(double p) const;
  double prob_below(double p) const;
  // Index of the atom selected by a uniform draw u in [0, 1).
  std::size_t quantile_index(double u) const;

  bool operator==(const Marginal& o) const = default;

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

// Independent items under a k-demand valuation: v(S) is the sum of the k
// largest item values in S.
struct ProductDistribution {
  std::vector<Marginal> marginals;
  int k = 1;

  int n() const { return static_cast<int>(marginals.size()); }
  bool additive() const { return k == n(); }
  bool unit_demand() const { return k == 1; }
  bool operator==(const ProductDistribution& o) const = default;
};

// Validates and normalizes the marginals; errors name the offending marginal.
ProductDistribution make_product(std::vector<Marginal> marginals, int k);
// Same, from raw (values, probs) lists as read from an instance file.
ProductDistribution make_product(const std::vector<std::vector<double>>& values,
                                 const std::vector<std::vector<double>>& probs, int k);

// Sum of the k largest entries of v over the items in `items`.
double value_of_set(const std::vector<double>& v, const std::vector<int>& items, int k);
// v([n]) for the class.
double value_of_all(const std::vector<double>& v, int k);

enum class TruncationMode { kAdditive, kMax };

// Canonical truncation D(T, p): values above T are capped at T and each item
// independently jumps to W = n^2 max(1,T)^3 with probability min(p_i / W, 1).
ProductDistribution truncate(const ProductDistribution& d, double t, const std::vector<double>& p,
                             TruncationMode mode);
// The mode matching the valuation class (Max for unit demand, Additive otherwise).
TruncationMode truncation_mode_for(const ProductDistribution& d);

// Number of joint support points, saturating on overflow.
BigCount support_size(const ProductDistribution& d);

// Calls fn(v, prob) once per joint support point in mixed-radix order (last
// item fastest). Throws kSupportTooLarge above cap.
void enumerate_support(const ProductDistribution& d,
                       const std::function<void(const std::vector<double>&, double)>& fn,
                       std::uint64_t cap = kDefaultSupportCap);

// Visits support points with linear index in [begin, end); for chunked loops.
void enumerate_support_range(const ProductDistribution& d, std::uint64_t begin, std::uint64_t end,
                             const std::function<void(const std::vector<double>&, double)>& fn);

// Draw number `index` of the stream identified by `seed`. A pure function of
// (d, seed, index).
void sample_into(const ProductDistribution& d, std::uint64_t seed, std::uint64_t index,
                 std::vector<double>& out);
std::vector<double> sample(const ProductDistribution& d, std::uint64_t seed, std::uint64_t index);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
};

struct McConfig {
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
};

// Running mean and variance (Welford), mergeable across chunks.
struct MeanAccumulator {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const MeanAccumulator& o);
  Estimate estimate() const;
};

enum class ExpectationMode { kExact, kMonteCarlo };

// E[v([n])]: closed form for additive classes, enumeration otherwise, or a
// Monte Carlo estimate when requested.
Estimate val_expectation(const ProductDistribution& d, ExpectationMode mode = ExpectationMode::kExact,
                         const McConfig& mc = {}, std::uint64_t cap = kDefaultSupportCap);

}  // namespace menuforge
