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

#include "menuforge/menu.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "menuforge/error.hpp"
#include "menuforge/parallel.hpp"

namespace menuforge {

ItemGroup::ItemGroup(int n, std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
  require(n >= 1, ErrorCode::kInvalidArgument, "group needs at least one item");
  block_of_.assign(n, -1);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    require(!blocks_[b].empty(), ErrorCode::kInvalidArgument, "group block is empty");
    std::sort(blocks_[b].begin(), blocks_[b].end());
    for (int i : blocks_[b]) {
      require(i >= 0 && i < n, ErrorCode::kInvalidArgument,
              "group block names item " + std::to_string(i) + " outside [0, n)");
      require(block_of_[i] == -1, ErrorCode::kInvalidArgument,
              "item " + std::to_string(i) + " appears in two blocks");
      block_of_[i] = static_cast<int>(b);
    }
  }
  for (int i = 0; i < n; ++i) {
    require(block_of_[i] != -1, ErrorCode::kInvalidArgument,
            "item " + std::to_string(i) + " is in no block");
  }
}

ItemGroup ItemGroup::trivial(int n) {
  std::vector<std::vector<int>> blocks(n);
  for (int i = 0; i < n; ++i) blocks[i] = {i};
  return ItemGroup(n, std::move(blocks));
}

ItemGroup ItemGroup::full(int n) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  return ItemGroup(n, {all});
}

bool ItemGroup::same_partition(const ItemGroup& o) const {
  if (n() != o.n() || blocks_.size() != o.blocks_.size()) return false;
  for (int i = 0; i < n(); ++i) {
    // Blocks are sorted, so comparing the block containing each item suffices.
    if (blocks_[block_of_[i]] != o.blocks_[o.block_of_[i]]) return false;
  }
  return true;
}

std::size_t SymmetricMenu::option_count() const {
  std::size_t c = 0;
  for (const SymmetricComponent& comp : components) c += comp.options.size();
  return c;
}

void validate_menu(const SymmetricMenu& m, int k) {
  require(m.n >= 1, ErrorCode::kInvalidArgument, "menu needs n >= 1");
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    const SymmetricComponent& comp = m.components[c];
    const std::string where = "component " + std::to_string(c);
    require(comp.group.n() == m.n, ErrorCode::kLengthMismatch, where + ": group size differs from n");
    for (std::size_t o = 0; o < comp.options.size(); ++o) {
      const MenuOption& opt = comp.options[o];
      const std::string at = where + " option " + std::to_string(o);
      require(static_cast<int>(opt.x.size()) == m.n, ErrorCode::kLengthMismatch,
              at + ": allocation length differs from n");
      for (double xi : opt.x) {
        require(std::isfinite(xi) && xi >= 0.0 && xi <= 1.0, ErrorCode::kInvalidArgument,
                at + ": allocation entries must lie in [0,1]");
      }
      require(exact_sum(opt.x) <= k + 1e-9, ErrorCode::kInvalidArgument,
              at + ": allocation exceeds the demand k = " + std::to_string(k));
      require(std::isfinite(opt.price) && opt.price >= 0.0, ErrorCode::kInvalidArgument,
              at + ": price must be finite and non-negative");
    }
  }
}

double option_utility(const std::vector<double>& v, const std::vector<double>& x, double price) {
  return exact_dot_minus(v.data(), x.data(), std::min(v.size(), x.size()), price);
}

namespace {

// Items of each block ordered by value descending, ties by lower index.
std::vector<int> value_order(const std::vector<double>& v, const std::vector<int>& block) {
  std::vector<int> order = block;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
  return order;
}

std::vector<double> sorted_desc(const std::vector<double>& x, const std::vector<int>& block) {
  std::vector<double> out;
  out.reserve(block.size());
  for (int i : block) out.push_back(x[i]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

Variant best_symmetric_variant(const std::vector<double>& v, const ItemGroup& group,
                               const std::vector<double>& x, double price) {
  Variant out;
  out.x.assign(x.size(), 0.0);
  for (const std::vector<int>& block : group.blocks()) {
    const std::vector<int> order = value_order(v, block);
    const std::vector<double> xs = sorted_desc(x, block);
    for (std::size_t t = 0; t < order.size(); ++t) out.x[order[t]] = xs[t];
  }
  out.utility = option_utility(v, out.x, price);
  return out;
}

double tie_tolerance(const std::vector<double>& v) {
  double s = 0.0;
  for (double vi : v) s += std::abs(vi);
  return 1e-9 * (1.0 + s);
}

PreparedMenu::PreparedMenu(const SymmetricMenu& m) : menu_(&m) {
  sorted_x_.resize(m.components.size());
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    const SymmetricComponent& comp = m.components[c];
    auto& per_option = sorted_x_[c];
    per_option.resize(comp.options.size());
    for (std::size_t o = 0; o < comp.options.size(); ++o) {
      for (const std::vector<int>& block : comp.group.blocks()) {
        const std::vector<double> xb = sorted_desc(comp.options[o].x, block);
        per_option[o].insert(per_option[o].end(), xb.begin(), xb.end());
      }
    }
  }
}

PreparedMenu::Best PreparedMenu::find(const std::vector<double>& v) const {
  const SymmetricMenu& m = *menu_;
  std::vector<std::vector<double>> utilities(m.components.size());
  double best_u = 0.0;
  std::vector<double> flat_v;
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    const SymmetricComponent& comp = m.components[c];
    flat_v.clear();
    for (const std::vector<int>& block : comp.group.blocks()) {
      std::vector<double> vb = sorted_desc(v, block);
      flat_v.insert(flat_v.end(), vb.begin(), vb.end());
    }
    utilities[c].resize(comp.options.size());
    for (std::size_t o = 0; o < comp.options.size(); ++o) {
      const double u =
          exact_dot_minus(flat_v.data(), sorted_x_[c][o].data(), flat_v.size(), comp.options[o].price);
      utilities[c][o] = u;
      best_u = std::max(best_u, u);
    }
  }
  const double floor = best_u - tie_tolerance(v);
  Best best;  // null option
  bool have = false;
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    for (std::size_t o = 0; o < utilities[c].size(); ++o) {
      if (utilities[c][o] < floor) continue;
      const double p = m.components[c].options[o].price;
      if (!have || p > best.price) {
        best = Best{static_cast<int>(c), static_cast<int>(o), p, utilities[c][o]};
        have = true;
      }
    }
  }
  return best;
}

BuyerChoice PreparedMenu::choose(const std::vector<double>& v) const {
  const Best b = find(v);
  BuyerChoice out;
  if (b.component < 0) {
    out.x.assign(v.size(), 0.0);
    return out;
  }
  const SymmetricComponent& comp = menu_->components[b.component];
  Variant var = best_symmetric_variant(v, comp.group, comp.options[b.option].x, b.price);
  out.component = b.component;
  out.option = b.option;
  out.x = std::move(var.x);
  out.price = b.price;
  out.utility = b.utility;
  return out;
}

double PreparedMenu::price_paid(const std::vector<double>& v) const { return find(v).price; }

BuyerChoice choose(const std::vector<double>& v, const SymmetricMenu& m) {
  return PreparedMenu(m).choose(v);
}

double revenue_exact(const SymmetricMenu& m, const ProductDistribution& d, std::uint64_t cap) {
  require(m.n == d.n(), ErrorCode::kLengthMismatch, "menu and distribution differ in item count");
  const BigCount size = support_size(d);
  require(size.fits(cap), ErrorCode::kSupportTooLarge,
          "joint support exceeds the enumeration cap of " + std::to_string(cap) + " points");
  const PreparedMenu pm(m);
  const auto parts = map_chunks(size.value, 2048, [&](std::size_t b, std::size_t e) {
    std::vector<double> terms;
    terms.reserve(e - b);
    enumerate_support_range(d, b, e, [&](const std::vector<double>& v, double prob) {
      terms.push_back(prob * pm.price_paid(v));
    });
    return exact_sum(terms);
  });
  return exact_sum(parts);
}

Estimate revenue_mc(const SymmetricMenu& m, const ProductDistribution& d, const McConfig& mc) {
  require(m.n == d.n(), ErrorCode::kLengthMismatch, "menu and distribution differ in item count");
  require(mc.samples >= 2, ErrorCode::kInvalidArgument, "Monte Carlo needs at least 2 samples");
  const PreparedMenu pm(m);
  const auto parts = map_chunks(mc.samples, 4096, [&](std::size_t b, std::size_t e) {
    MeanAccumulator acc;
    std::vector<double> v;
    for (std::size_t s = b; s < e; ++s) {
      sample_into(d, mc.seed, s, v);
      acc.add(pm.price_paid(v));
    }
    return acc;
  });
  MeanAccumulator total;
  for (const MeanAccumulator& a : parts) total.merge(a);
  return total.estimate();
}

std::vector<double> leftovers(const SymmetricMenu& m) {
  std::vector<double> most(m.n, 0.0);
  for (const SymmetricComponent& comp : m.components) {
    for (const std::vector<int>& block : comp.group.blocks()) {
      double top = 0.0;
      for (const MenuOption& opt : comp.options) {
        for (int i : block) top = std::max(top, opt.x[i]);
      }
      for (int i : block) most[i] = std::max(most[i], top);
    }
  }
  std::vector<double> out(m.n);
  for (int i = 0; i < m.n; ++i) out[i] = 1.0 - most[i];
  return out;
}

double modrev_objective(const SymmetricMenu& m, const ProductDistribution& d,
                        const std::vector<double>& w, std::uint64_t cap) {
  require(static_cast<int>(w.size()) == m.n, ErrorCode::kLengthMismatch,
          "weight vector length differs from item count");
  const std::vector<double> l = leftovers(m);
  std::vector<double> terms{revenue_exact(m, d, cap)};
  for (int i = 0; i < m.n; ++i) terms.push_back(w[i] * l[i]);
  return exact_sum(terms);
}

SymmetricMenu scale_prices(const SymmetricMenu& m, double factor) {
  require(factor > 0.0 && factor <= 1.0, ErrorCode::kInvalidArgument, "scale factor must lie in (0,1]");
  SymmetricMenu out = m;
  for (SymmetricComponent& comp : out.components) {
    for (MenuOption& opt : comp.options) opt.price *= factor;
  }
  return out;
}

SymmetricMenu make_exclusive(const SymmetricMenu& m, double e, double eps) {
  require(e > 0.0, ErrorCode::kInvalidArgument, "exclusivity threshold must be positive");
  require(eps > 0.0 && eps < 1.0, ErrorCode::kInvalidArgument, "eps must lie in (0,1)");
  const double keep = 1.0 - eps;
  SymmetricMenu out;
  out.n = m.n;
  for (const SymmetricComponent& comp : m.components) {
    SymmetricComponent cheap{comp.group, {}};
    SymmetricComponent dear{comp.group, {}};
    for (const MenuOption& opt : comp.options) {
      if (opt.price <= e) {
        cheap.options.push_back(MenuOption{opt.x, opt.price * keep});
        continue;
      }
      // One single-item lottery per block and distinct positive entry; the
      // group supplies the other items of the block.
      for (const std::vector<int>& block : comp.group.blocks()) {
        std::vector<double> vals = sorted_desc(opt.x, block);
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (double a : vals) {
          if (a <= 0.0) continue;
          MenuOption single{std::vector<double>(m.n, 0.0), opt.price * keep};
          single.x[block.front()] = a;
          dear.options.push_back(std::move(single));
        }
      }
    }
    if (!cheap.options.empty()) out.components.push_back(std::move(cheap));
    if (!dear.options.empty()) out.components.push_back(std::move(dear));
  }
  return out;
}

SymmetricMenu concat_exclusive(const SymmetricMenu& m, double t,
                               const std::vector<std::optional<double>>& r, double eps) {
  require(static_cast<int>(r.size()) == m.n, ErrorCode::kLengthMismatch,
          "reserve vector length differs from item count");
  require(eps > 0.0 && eps < 1.0, ErrorCode::kInvalidArgument, "eps must lie in (0,1)");
  const PreparedMenu pm(m);
  SymmetricComponent extra{ItemGroup::trivial(m.n), {}};
  for (int i = 0; i < m.n; ++i) {
    if (!r[i]) continue;
    std::vector<double> v(m.n, 0.0);
    v[i] = t;
    const BuyerChoice c = pm.choose(v);
    MenuOption opt{std::vector<double>(m.n, 0.0), c.price + *r[i] * (1.0 - c.x[i])};
    opt.x[i] = 1.0;
    extra.options.push_back(std::move(opt));
  }
  SymmetricMenu out = m;
  if (!extra.options.empty()) out.components.push_back(std::move(extra));
  return scale_prices(out, 1.0 - eps);
}

SymmetricMenu prune_dominated(const SymmetricMenu& m) {
  struct Single {
    int component;
    int option;
    int item;
    double prob;
    double price;
  };
  std::vector<Single> singles;
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    const SymmetricComponent& comp = m.components[c];
    for (std::size_t o = 0; o < comp.options.size(); ++o) {
      int item = -1;
      int positive = 0;
      for (int i = 0; i < m.n; ++i) {
        if (comp.options[o].x[i] > 0.0) {
          item = i;
          ++positive;
        }
      }
      if (positive == 1) {
        singles.push_back(Single{static_cast<int>(c), static_cast<int>(o), item,
                                 comp.options[o].x[item], comp.options[o].price});
      }
    }
  }
  auto reaches = [&](const Single& s, int item) {
    const ItemGroup& g = m.components[s.component].group;
    return g.block_of(s.item) == g.block_of(item);
  };
  // a dominates b: at least the probability at no higher unit price, with
  // exact duplicates resolved toward the earlier option.
  auto dominates = [](const Single& a, std::size_t ia, const Single& b, std::size_t ib) {
    if (a.prob < b.prob) return false;
    const double lhs = a.price * b.prob;
    const double rhs = b.price * a.prob;
    if (lhs > rhs) return false;
    return a.prob > b.prob || lhs < rhs || ia < ib;
  };
  std::vector<bool> alive(singles.size(), true);
  for (std::size_t s = 0; s < singles.size(); ++s) {
    const Single& target = singles[s];
    const ItemGroup& g = m.components[target.component].group;
    bool covered = true;
    for (int item : g.blocks()[g.block_of(target.item)]) {
      bool found = false;
      for (std::size_t o = 0; o < singles.size() && !found; ++o) {
        if (o == s || !alive[o]) continue;
        found = reaches(singles[o], item) && dominates(singles[o], o, target, s);
      }
      if (!found) {
        covered = false;
        break;
      }
    }
    if (covered) alive[s] = false;
  }
  std::set<std::pair<int, int>> removed;
  for (std::size_t s = 0; s < singles.size(); ++s) {
    if (!alive[s]) removed.insert({singles[s].component, singles[s].option});
  }
  SymmetricMenu out;
  out.n = m.n;
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    SymmetricComponent comp{m.components[c].group, {}};
    for (std::size_t o = 0; o < m.components[c].options.size(); ++o) {
      if (!removed.count({static_cast<int>(c), static_cast<int>(o)})) {
        comp.options.push_back(m.components[c].options[o]);
      }
    }
    if (!comp.options.empty()) out.components.push_back(std::move(comp));
  }
  return out;
}

BigCount orbit_size(const ItemGroup& group, const std::vector<double>& x) {
  BigCount total = BigCount::of(1);
  for (const std::vector<int>& block : group.blocks()) {
    const std::vector<double> xs = sorted_desc(x, block);
    std::vector<int> counts;
    for (std::size_t t = 0; t < xs.size(); ++t) {
      if (t == 0 || xs[t] != xs[t - 1]) counts.push_back(0);
      ++counts.back();
    }
    total = total * multinomial(counts);
  }
  return total;
}

namespace {

constexpr std::uint64_t kExpandLimit = 200'000;

// Distinct concrete options across all components, by orbit expansion.
std::uint64_t count_concrete(const SymmetricMenu& m) {
  std::set<std::pair<double, std::vector<double>>> seen;
  for (const SymmetricComponent& comp : m.components) {
    const auto& blocks = comp.group.blocks();
    for (const MenuOption& opt : comp.options) {
      std::vector<std::vector<double>> parts;
      for (const std::vector<int>& block : blocks) {
        std::vector<double> xs = sorted_desc(opt.x, block);
        std::reverse(xs.begin(), xs.end());
        parts.push_back(std::move(xs));
      }
      std::vector<double> x(m.n, 0.0);
      std::function<void(std::size_t)> rec = [&](std::size_t b) {
        if (b == blocks.size()) {
          seen.insert({opt.price, x});
          return;
        }
        std::vector<double> perm = parts[b];
        do {
          for (std::size_t t = 0; t < perm.size(); ++t) x[blocks[b][t]] = perm[t];
          rec(b + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
      };
      rec(0);
    }
  }
  return seen.size();
}

}  // namespace

ComplexityReport complexity_measures(const SymmetricMenu& m) {
  ComplexityReport rep;
  rep.mc = BigCount::of(0);
  bool same_group = true;
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    const SymmetricComponent& comp = m.components[c];
    if (c > 0 && !comp.group.same_partition(m.components[0].group)) same_group = false;
    std::set<std::pair<double, std::vector<double>>> seen;
    for (const MenuOption& opt : comp.options) {
      std::vector<double> key;
      for (const std::vector<int>& block : comp.group.blocks()) {
        const std::vector<double> xs = sorted_desc(opt.x, block);
        key.insert(key.end(), xs.begin(), xs.end());
      }
      if (!seen.insert({opt.price, key}).second) continue;
      rep.mc = rep.mc + orbit_size(comp.group, opt.x);
    }
    rep.declared_wsmc += comp.options.size();
  }
  rep.declared_ssmc = same_group ? BigCount::of(rep.declared_wsmc) : BigCount{true, 0};
  if (m.components.size() > 1 && rep.mc.fits(kExpandLimit)) rep.mc = BigCount::of(count_concrete(m));
  return rep;
}

}  // namespace menuforge
