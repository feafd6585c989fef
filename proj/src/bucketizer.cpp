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

#include "menuforge/bucketizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "menuforge/benchmarks.hpp"
#include "menuforge/discretize.hpp"
#include "menuforge/error.hpp"
#include "menuforge/parallel.hpp"

namespace menuforge {

BucketMechanism build_buckets(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  require(p.size() == q.size(), ErrorCode::kLengthMismatch, "price and probability vectors differ in length");
  require(eps > 0.0 && eps < 1.0, ErrorCode::kInvalidArgument, "eps must lie in (0,1)");
  const int n = static_cast<int>(p.size());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    require(std::isfinite(p[i]) && p[i] >= 0.0, ErrorCode::kInvalidArgument,
            "price of item " + std::to_string(i) + " must be finite and non-negative");
    require(q[i] >= 0.0 && q[i] <= 1.0, ErrorCode::kInvalidArgument,
            "sale probability of item " + std::to_string(i) + " must lie in [0,1]");
    s += p[i] * q[i];
  }
  require(s > 0.0, ErrorCode::kDegenerateInput, "sum of p_i q_i is zero");

  BucketMechanism bm;
  bm.n = n;
  bm.eps = eps;
  bm.sale_revenue = s;
  const double high = s / (eps * eps);
  const double low = eps * eps * eps * s;

  std::vector<int> low_items;
  double low_mass = 0.0;
  std::map<double, std::vector<int>, std::greater<>> levels;
  for (int i = 0; i < n; ++i) {
    if (p[i] >= high) {
      bm.b0.push_back({i, p[i]});
    } else if (p[i] <= low) {
      low_items.push_back(i);
      low_mass += p[i] * q[i];
    } else {
      levels[round_down_to_power(p[i], high, 1.0 - eps)].push_back(i);
    }
  }
  if (!low_items.empty()) {
    if (low_mass >= eps * s) {
      bm.joint = Bucket{low_items, (1.0 - eps / 2.0) * low_mass};
    } else {
      bm.dropped = low_items;
    }
  }
  for (auto& [price, items] : levels) {
    std::stable_sort(items.begin(), items.end(), [&](int a, int b) { return q[a] > q[b]; });
    Bucket open{{}, price};
    double mass = 0.0;
    for (int i : items) {
      if (q[i] >= eps / 2.0) {
        bm.buckets.push_back(Bucket{{i}, price});
        continue;
      }
      if (!open.items.empty() && mass + q[i] > eps) {
        bm.buckets.push_back(open);
        open.items.clear();
        mass = 0.0;
      }
      open.items.push_back(i);
      mass += q[i];
    }
    if (!open.items.empty()) bm.buckets.push_back(open);
  }
  for (Bucket& b : bm.buckets) std::sort(b.items.begin(), b.items.end());
  return bm;
}

SalePlan separate_sale_plan(const ProductDistribution& d) {
  SalePlan plan;
  for (const Marginal& m : d.marginals) {
    const MonopolyResult mono = monopoly_price(m, 0.0);
    const double price = mono.price.value_or(0.0);
    plan.p.push_back(price);
    plan.q.push_back(price > 0.0 ? m.prob_at_least(price) : 0.0);
  }
  return plan;
}

void validate_buckets(const BucketMechanism& bm) {
  std::vector<int> seen(bm.n, 0);
  auto mark = [&](int i) {
    require(i >= 0 && i < bm.n, ErrorCode::kInvalidArgument, "bucket item " + std::to_string(i) + " out of range");
    require(seen[i]++ == 0, ErrorCode::kInvalidArgument, "item " + std::to_string(i) + " appears twice");
  };
  for (const PricedItem& it : bm.b0) mark(it.item);
  for (const Bucket& b : bm.buckets) {
    require(!b.items.empty(), ErrorCode::kInvalidArgument, "empty bucket");
    require(b.price > 0.0, ErrorCode::kInvalidArgument, "bucket price must be positive");
    for (int i : b.items) mark(i);
  }
  if (bm.joint) {
    require(!bm.joint->items.empty(), ErrorCode::kInvalidArgument, "empty joint bundle");
    require(bm.joint->price > 0.0, ErrorCode::kInvalidArgument, "joint price must be positive");
    for (int i : bm.joint->items) mark(i);
  }
  for (int i : bm.dropped) mark(i);
}

std::uint64_t bucket_count_bound(const std::vector<double>& q, double eps) {
  const auto own = static_cast<std::uint64_t>(std::count_if(q.begin(), q.end(), [&](double x) { return x >= eps / 2.0; }));
  const double heavy = std::ceil(2.0 / (eps * eps * eps));
  const double levels = std::ceil(std::log(std::pow(eps, 5)) / std::log1p(-eps));
  return own + static_cast<std::uint64_t>(heavy) + static_cast<std::uint64_t>(levels);
}

BigCount bucket_declared_ssmc(const BucketMechanism& bm) {
  BigCount c = BigCount::of(bm.b0.size() + 1);
  for (std::size_t b = 0; b < bm.buckets.size(); ++b) c = c * BigCount::of(2);
  if (bm.joint) c = c * BigCount::of(2);
  return c;
}

SymmetricMenu bucket_to_menu(const BucketMechanism& bm, std::uint64_t max_options) {
  validate_buckets(bm);
  const BigCount count = bucket_declared_ssmc(bm);
  require(count.fits(max_options), ErrorCode::kMenuTooLarge,
          "bucket menu needs " + (count.overflow ? std::string("more than 2^63") : std::to_string(count.value)) +
              " options, budget " + std::to_string(max_options));

  std::vector<std::vector<int>> blocks;
  std::vector<bool> in_bucket(bm.n, false);
  for (const Bucket& b : bm.buckets) {
    blocks.push_back(b.items);
    for (int i : b.items) in_bucket[i] = true;
  }
  for (int i = 0; i < bm.n; ++i) {
    if (!in_bucket[i]) blocks.push_back({i});
  }
  SymmetricComponent comp{ItemGroup(bm.n, blocks), {}};

  const std::size_t k = bm.buckets.size();
  const int joint_choices = bm.joint ? 2 : 1;
  for (int b0 = -1; b0 < static_cast<int>(bm.b0.size()); ++b0) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      for (int j = 0; j < joint_choices; ++j) {
        MenuOption opt{std::vector<double>(bm.n, 0.0), 0.0};
        if (b0 >= 0) {
          opt.x[bm.b0[b0].item] = 1.0;
          opt.price += bm.b0[b0].price;
        }
        for (std::size_t b = 0; b < k; ++b) {
          if (!(mask >> b & 1)) continue;
          opt.x[bm.buckets[b].items.front()] = 1.0;
          opt.price += bm.buckets[b].price;
        }
        if (j == 1) {
          for (int i : bm.joint->items) opt.x[i] = 1.0;
          opt.price += bm.joint->price;
        }
        comp.options.push_back(std::move(opt));
      }
    }
  }
  SymmetricMenu m;
  m.n = bm.n;
  m.components.push_back(std::move(comp));
  return m;
}

namespace {

double decomposed_payment(const BucketMechanism& bm, const std::vector<double>& v) {
  double paid = 0.0;
  for (const PricedItem& it : bm.b0) {
    if (v[it.item] >= it.price) paid += it.price;
  }
  for (const Bucket& b : bm.buckets) {
    double best = 0.0;
    for (int i : b.items) best = std::max(best, v[i]);
    if (best >= b.price) paid += b.price;
  }
  if (bm.joint) {
    double total = 0.0;
    for (int i : bm.joint->items) total += v[i];
    if (total >= bm.joint->price) paid += bm.joint->price;
  }
  return paid;
}

}  // namespace

Estimate bucket_revenue(const BucketMechanism& bm, const ProductDistribution& d, EvalMode mode,
                        const McConfig& mc, std::uint64_t support_cap) {
  require(d.n() == bm.n, ErrorCode::kLengthMismatch, "mechanism and distribution differ in item count");
  require(d.k == d.n(), ErrorCode::kUnsupportedClass, "bucket revenue is defined for additive buyers only");
  validate_buckets(bm);

  if (mode == EvalMode::kMonteCarlo) {
    require(mc.samples >= 2, ErrorCode::kInvalidArgument, "Monte Carlo needs at least 2 samples");
    const auto parts = map_chunks(mc.samples, 4096, [&](std::size_t b, std::size_t e) {
      MeanAccumulator acc;
      std::vector<double> v;
      for (std::size_t s = b; s < e; ++s) {
        sample_into(d, mc.seed, s, v);
        acc.add(decomposed_payment(bm, v));
      }
      return acc;
    });
    MeanAccumulator total;
    for (const MeanAccumulator& a : parts) total.merge(a);
    return total.estimate();
  }

  double revenue = 0.0;
  for (const PricedItem& it : bm.b0) revenue += it.price * d.marginals[it.item].prob_at_least(it.price);
  for (const Bucket& b : bm.buckets) {
    double none = 1.0;
    for (int i : b.items) none *= d.marginals[i].prob_below(b.price);
    revenue += b.price * (1.0 - none);
  }
  if (bm.joint) {
    std::map<double, double> sums{{0.0, 1.0}};
    for (int i : bm.joint->items) {
      const Marginal& m = d.marginals[i];
      std::map<double, double> next;
      for (const auto& [s, pr] : sums) {
        for (std::size_t a = 0; a < m.size(); ++a) next[s + m.values()[a]] += pr * m.probs()[a];
      }
      require(next.size() <= support_cap, ErrorCode::kBudgetExceeded,
              "joint bundle value has more than " + std::to_string(support_cap) + " distinct sums");
      sums = std::move(next);
    }
    double sell = 0.0;
    for (auto it = sums.lower_bound(bm.joint->price); it != sums.end(); ++it) sell += it->second;
    revenue += bm.joint->price * sell;
  }
  return Estimate{revenue, 0.0, true};
}

}  // namespace menuforge
