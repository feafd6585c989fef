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

#include "menuforge/numeric.hpp"

#include <cmath>

namespace menuforge {
namespace {

// Shewchuk accumulator over nonoverlapping partials.
class Partials {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : p_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) p_[i++] = lo;
      x = hi;
    }
    p_.resize(i);
    p_.push_back(x);
  }

  double result() const {
    if (p_.empty()) return 0.0;
    std::size_t n = p_.size();
    double hi = p_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = p_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Half-way case: round correctly using the next partial's sign.
    if (n > 0 && ((lo < 0.0 && p_[n - 1] < 0.0) || (lo > 0.0 && p_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> p_;
};

}  // namespace

double exact_sum(const double* terms, std::size_t count) {
  Partials acc;
  for (std::size_t i = 0; i < count; ++i) acc.add(terms[i]);
  return acc.result();
}

double exact_dot_minus(const double* a, const double* b, std::size_t count, double c) {
  Partials acc;
  for (std::size_t i = 0; i < count; ++i) {
    const double prod = a[i] * b[i];
    if (prod == 0.0) continue;
    acc.add(prod);
    acc.add(std::fma(a[i], b[i], -prod));
  }
  acc.add(-c);
  return acc.result();
}

BigCount BigCount::operator+(const BigCount& o) const {
  if (overflow || o.overflow) return {true, 0};
  const std::uint64_t s = value + o.value;
  return s < value ? BigCount{true, 0} : of(s);
}

BigCount BigCount::operator*(const BigCount& o) const {
  if (overflow || o.overflow) return {true, 0};
  unsigned __int128 p = static_cast<unsigned __int128>(value) * o.value;
  if (p > kLimit) return {true, 0};
  return {false, static_cast<std::uint64_t>(p)};
}

BigCount multinomial(const std::vector<int>& counts) {
  // Product of binomials C(running, c), each computed incrementally so every
  // intermediate is itself an integer binomial.
  BigCount result = BigCount::of(1);
  std::uint64_t running = 0;
  for (int c : counts) {
    unsigned __int128 binom = 1;
    for (int t = 1; t <= c; ++t) {
      binom = binom * (running + t) / t;
      if (binom > BigCount::kLimit) return {true, 0};
    }
    running += c;
    result = result * BigCount::of(static_cast<std::uint64_t>(binom));
    if (result.overflow) return result;
  }
  return result;
}

}  // namespace menuforge
