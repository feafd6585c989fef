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

#include <cstdint>
#include <optional>
#include <vector>

#include "menuforge/dist.hpp"
#include "menuforge/menu.hpp"
#include "menuforge/numeric.hpp"

namespace menuforge {

struct PricedItem {
  int item = 0;
  double price = 0.0;
};

// Buy at most one item of `items`, or all of them for the joint bundle.
struct Bucket {
  std::vector<int> items;
  double price = 0.0;
};

struct BucketMechanism {
  int n = 0;
  double eps = 0.0;
  double sale_revenue = 0.0;  // S = sum p_i q_i
  std::vector<PricedItem> b0;
  std::vector<Bucket> buckets;
  std::optional<Bucket> joint;
  std::vector<int> dropped;  // low items whose total p q is below eps S
};

// High items (p >= S/eps^2) go to B0 at their own prices. Low items
// (p <= eps^3 S) form the joint bundle at (1 - eps/2) times their p q mass
// when that mass reaches eps S, otherwise they are dropped. Medium prices are
// rounded down to (S/eps^2)(1-eps)^e; items with q >= eps/2 get their own
// bucket and the rest are packed per price level in descending q, a bucket
// closing once the next item would push its q mass past eps.
BucketMechanism build_buckets(const std::vector<double>& p, const std::vector<double>& q, double eps);

// Prices and sale probabilities of the optimal separate per-item prices.
struct SalePlan {
  std::vector<double> p;
  std::vector<double> q;
};
SalePlan separate_sale_plan(const ProductDistribution& d);

void validate_buckets(const BucketMechanism& bm);

// #{q_i >= eps/2} + ceil(2/eps^3) + ceil(log_{1-eps}(eps^5)).
std::uint64_t bucket_count_bound(const std::vector<double>& q, double eps);

// (|B0| + 1) * 2^k * (2 if joint else 1): option classes under the group that
// permutes each bucket, null option included.
BigCount bucket_declared_ssmc(const BucketMechanism& bm);

// One component whose group permutes items inside each bucket; options are
// the representatives of every (B0 choice, bucket subset, joint flag)
// pattern, the empty pattern being the null option. B0 is exclusive here.
SymmetricMenu bucket_to_menu(const BucketMechanism& bm, std::uint64_t max_options = 1'000'000);

enum class EvalMode { kExact, kMonteCarlo };

// Decomposed revenue for an additive buyer: each B0 item sells on its own
// when v_j >= p_j, each bucket sells when its best value reaches the price,
// the joint bundle sells when its summed value does. Exact mode convolves
// the joint bundle's values and throws kBudgetExceeded past `support_cap`
// distinct sums.
Estimate bucket_revenue(const BucketMechanism& bm, const ProductDistribution& d, EvalMode mode,
                        const McConfig& mc = {}, std::uint64_t support_cap = kDefaultSupportCap);

}  // namespace menuforge
