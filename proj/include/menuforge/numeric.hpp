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
#include <vector>

namespace menuforge {

// Correctly rounded sum of the terms (Shewchuk's partials, as in Python's
// math.fsum). The result depends only on the multiset of terms.
double exact_sum(const double* terms, std::size_t count);
inline double exact_sum(const std::vector<double>& terms) {
  return exact_sum(terms.data(), terms.size());
}

// Correctly rounded value of sum_i a[i] * b[i] - c. Products are split exactly
// with fma, so the result is a monotone function of the real-valued expression.
double exact_dot_minus(const double* a, const double* b, std::size_t count, double c);

// Saturating count used for orbit sizes and support sizes.
struct BigCount {
  bool overflow = false;
  std::uint64_t value = 0;

  static constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;

  static BigCount of(std::uint64_t v) { return v > kLimit ? BigCount{true, 0} : BigCount{false, v}; }
  BigCount operator+(const BigCount& o) const;
  BigCount operator*(const BigCount& o) const;
  bool operator==(const BigCount& o) const = default;
  bool fits(std::uint64_t cap) const { return !overflow && value <= cap; }
};

// Multinomial coefficient (sum counts)! / prod(counts!) with overflow detection.
BigCount multinomial(const std::vector<int>& counts);

}  // namespace menuforge
