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

#include "menuforge/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "menuforge/error.hpp"
#include "menuforge/parallel.hpp"

namespace menuforge {

namespace {

void check_params(const DiscretizationParams& p) {
  require(p.delta > 0.0 && p.delta < 1.0, ErrorCode::kInvalidArgument, "delta must lie in (0,1)");
  require(p.rev_proxy > 0.0 && std::isfinite(p.rev_proxy), ErrorCode::kInvalidArgument,
          "revenue proxy must be positive");
  require(p.t > 0.0 && std::isfinite(p.t), ErrorCode::kInvalidArgument, "t must be positive");
  require(p.k >= 1, ErrorCode::kInvalidK, "k must be at least 1");
}

// Builds the target marginal from (value, prob) pieces, merging equal values,
// and records the source-atom -> target-atom map.
struct MarginalBuilder {
  std::map<double, std::vector<double>> mass;

  void add(double value, double prob) { mass[value].push_back(prob); }

  Marginal build(std::vector<double>* values_out) const {
    std::vector<double> values;
    std::vector<double> probs;
    for (const auto& [v, terms] : mass) {
      const double p = exact_sum(terms);
      if (p <= 0.0) continue;
      values.push_back(v);
      probs.push_back(p);
    }
    if (values_out) *values_out = values;
    return Marginal(values, probs);
  }
};

int index_of(const std::vector<double>& values, double v) {
  const auto it = std::lower_bound(values.begin(), values.end(), v);
  return static_cast<int>(it - values.begin());
}

// Joint (v, v', prob) enumeration over the item-wise coupling.
struct PairAtom {
  double v;
  double v2;
  double prob;
};

std::vector<std::vector<PairAtom>> pair_atoms(const ProductDistribution& d,
                                              const ProductDistribution& d2, const Coupling& c) {
  std::vector<std::vector<PairAtom>> out(d.n());
  for (int i = 0; i < d.n(); ++i) {
    const Marginal& m = d.marginals[i];
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (const auto& [b, cp] : c.items[i][a]) {
        if (cp <= 0.0) continue;
        out[i].push_back(PairAtom{m.values()[a], d2.marginals[i].values()[b], m.probs()[a] * cp});
      }
    }
  }
  return out;
}

double top_k_positive(std::vector<double>& diff, int k) {
  std::sort(diff.begin(), diff.end(), std::greater<>());
  std::vector<double> take;
  for (int j = 0; j < k && j < static_cast<int>(diff.size()); ++j) {
    if (diff[j] <= 0.0) break;
    take.push_back(diff[j]);
  }
  return exact_sum(take);
}

// Conditional expectation of the partner value given each atom: for the
// forward direction E[v'_i | v_i = a], for the reverse E[v_i | v'_i = b].
std::vector<std::vector<double>> partner_means(const ProductDistribution& d,
                                               const ProductDistribution& d2, const Coupling& c,
                                               bool reverse) {
  const int n = d.n();
  std::vector<std::vector<double>> out(n);
  for (int i = 0; i < n; ++i) {
    const Marginal& m = d.marginals[i];
    const Marginal& m2 = d2.marginals[i];
    if (!reverse) {
      out[i].resize(m.size());
      for (std::size_t a = 0; a < m.size(); ++a) {
        std::vector<double> terms;
        for (const auto& [b, cp] : c.items[i][a]) terms.push_back(cp * m2.values()[b]);
        out[i][a] = exact_sum(terms);
      }
    } else {
      std::vector<std::vector<double>> num(m2.size());
      std::vector<std::vector<double>> den(m2.size());
      for (std::size_t a = 0; a < m.size(); ++a) {
        for (const auto& [b, cp] : c.items[i][a]) {
          num[b].push_back(m.probs()[a] * cp * m.values()[a]);
          den[b].push_back(m.probs()[a] * cp);
        }
      }
      out[i].resize(m2.size());
      for (std::size_t b = 0; b < m2.size(); ++b) {
        const double pb = exact_sum(den[b]);
        out[i][b] = pb > 0.0 ? exact_sum(num[b]) / pb : m2.values()[b];
      }
    }
  }
  return out;
}

// E over `base` of max(0, best menu allocation against (v - partner mean)).
Estimate menu_gap(const ProductDistribution& base, const std::vector<std::vector<double>>& partner,
                  const SymmetricMenu& m, const DeltaMConfig& config) {
  const int n = base.n();
  auto gap_at = [&](const std::vector<double>& v, const std::vector<std::size_t>& atom) {
    std::vector<double> diff(n);
    for (int i = 0; i < n; ++i) diff[i] = v[i] - partner[i][atom[i]];
    double best = 0.0;
    for (const SymmetricComponent& comp : m.components) {
      for (const MenuOption& opt : comp.options) {
        best = std::max(best, best_symmetric_variant(diff, comp.group, opt.x, 0.0).utility);
      }
    }
    return best;
  };
  auto atoms_of = [&](const std::vector<double>& v) {
    std::vector<std::size_t> atom(n);
    for (int i = 0; i < n; ++i) atom[i] = static_cast<std::size_t>(index_of(base.marginals[i].values(), v[i]));
    return atom;
  };
  if (!config.monte_carlo) {
    std::vector<double> terms;
    enumerate_support(base, [&](const std::vector<double>& v, double prob) {
      terms.push_back(prob * gap_at(v, atoms_of(v)));
    }, config.cap);
    return Estimate{exact_sum(terms), 0.0, true};
  }
  const auto parts = map_chunks(config.mc.samples, 4096, [&](std::size_t b, std::size_t e) {
    MeanAccumulator acc;
    std::vector<double> v;
    for (std::size_t s = b; s < e; ++s) {
      sample_into(base, config.mc.seed, s, v);
      acc.add(gap_at(v, atoms_of(v)));
    }
    return acc;
  });
  MeanAccumulator total;
  for (const MeanAccumulator& a : parts) total.merge(a);
  return total.estimate();
}

}  // namespace

Coupling Coupling::identity(const ProductDistribution& d) {
  Coupling c;
  c.items.resize(d.n());
  for (int i = 0; i < d.n(); ++i) {
    for (std::size_t a = 0; a < d.marginals[i].size(); ++a) {
      c.items[i].push_back({{static_cast<int>(a), 1.0}});
    }
  }
  return c;
}

Coupling Coupling::then(const Coupling& next) const {
  Coupling out;
  out.items.resize(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto& row : items[i]) {
      std::map<int, std::vector<double>> acc;
      for (const auto& [mid, p1] : row) {
        for (const auto& [dst, p2] : next.items[i][mid]) acc[dst].push_back(p1 * p2);
      }
      std::vector<std::pair<int, double>> composed;
      for (const auto& [dst, terms] : acc) composed.emplace_back(dst, exact_sum(terms));
      out.items[i].push_back(std::move(composed));
    }
  }
  return out;
}

void validate_coupling(const ProductDistribution& src, const ProductDistribution& dst,
                       const Coupling& c, double tol) {
  require(src.n() == dst.n() && static_cast<int>(c.items.size()) == src.n(), ErrorCode::kLengthMismatch,
          "coupling item count differs from the distributions");
  for (int i = 0; i < src.n(); ++i) {
    const Marginal& ms = src.marginals[i];
    const Marginal& md = dst.marginals[i];
    require(c.items[i].size() == ms.size(), ErrorCode::kLengthMismatch,
            "coupling rows differ from source atoms on item " + std::to_string(i));
    std::vector<std::vector<double>> reach(md.size());
    for (std::size_t a = 0; a < ms.size(); ++a) {
      std::vector<double> row;
      for (const auto& [b, p] : c.items[i][a]) {
        require(b >= 0 && b < static_cast<int>(md.size()) && p >= 0.0, ErrorCode::kInvalidArgument,
                "coupling entry out of range on item " + std::to_string(i));
        row.push_back(p);
        reach[b].push_back(ms.probs()[a] * p);
      }
      require(std::abs(exact_sum(row) - 1.0) <= tol, ErrorCode::kInvalidArgument,
              "coupling row does not sum to 1 on item " + std::to_string(i));
    }
    for (std::size_t b = 0; b < md.size(); ++b) {
      require(std::abs(exact_sum(reach[b]) - md.probs()[b]) <= tol, ErrorCode::kInvalidArgument,
              "coupling does not reproduce the target marginal on item " + std::to_string(i));
    }
  }
}

double round_down_to_power(double v, double top, double base) {
  const double f = std::log(v / top) / std::log(base);
  long e = std::max(0L, static_cast<long>(std::ceil(f)));
  auto level = [&](long j) { return top * std::pow(base, static_cast<double>(j)); };
  while (level(e) > v) ++e;
  while (e > 0 && level(e - 1) <= v) --e;
  return level(e);
}

Discretized value_discretize(const ProductDistribution& d, const DiscretizationParams& params) {
  check_params(params);
  const double top = params.t * params.rev_proxy;
  const double floor = params.delta * params.rev_proxy / params.k;
  const double base = 1.0 - params.delta;
  Discretized out;
  out.coupling.items.resize(d.n());
  std::vector<Marginal> marginals;
  for (int i = 0; i < d.n(); ++i) {
    const Marginal& m = d.marginals[i];
    std::vector<double> mapped(m.size());
    MarginalBuilder builder;
    for (std::size_t a = 0; a < m.size(); ++a) {
      const double v = m.values()[a];
      // A relative slack of 1e-12 absorbs the rounding in t * R itself.
      require(v <= top * (1.0 + 1e-12), ErrorCode::kBoundednessViolated,
              "item " + std::to_string(i) + " has value " + std::to_string(v) + " above t*R = " +
                  std::to_string(top));
      if (v < floor || v == 0.0) {
        mapped[a] = 0.0;
      } else {
        mapped[a] = v >= top ? top : round_down_to_power(v, top, base);
      }
      builder.add(mapped[a], m.probs()[a]);
    }
    std::vector<double> values;
    marginals.push_back(builder.build(&values));
    for (std::size_t a = 0; a < m.size(); ++a) {
      out.coupling.items[i].push_back({{index_of(values, mapped[a]), 1.0}});
    }
  }
  out.dist = ProductDistribution{std::move(marginals), d.k};
  return out;
}

Discretized prob_discretize(const ProductDistribution& d, const DiscretizationParams& params) {
  check_params(params);
  const double base = 1.0 - params.delta;
  const double cutoff = params.delta * params.delta / (static_cast<double>(params.n) * params.n);
  Discretized out;
  out.coupling.items.resize(d.n());
  std::vector<Marginal> marginals;
  for (int i = 0; i < d.n(); ++i) {
    const Marginal& m = d.marginals[i];
    std::vector<double> kept(m.size());
    std::vector<double> nonzero;
    for (std::size_t a = 0; a < m.size(); ++a) {
      const double q = m.probs()[a];
      if (m.values()[a] == 0.0) continue;
      kept[a] = q < cutoff ? 0.0 : round_down_to_power(q, 1.0, base);
      nonzero.push_back(kept[a]);
    }
    std::vector<double> values;
    std::vector<double> probs;
    const double zero_mass = std::max(0.0, 1.0 - exact_sum(nonzero));
    if (zero_mass > 0.0) {
      values.push_back(0.0);
      probs.push_back(zero_mass);
    }
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (m.values()[a] == 0.0 || kept[a] <= 0.0) continue;
      values.push_back(m.values()[a]);
      probs.push_back(kept[a]);
    }
    Marginal target(values, probs);
    const std::vector<double>& tv = target.values();
    for (std::size_t a = 0; a < m.size(); ++a) {
      const double v = m.values()[a];
      std::vector<std::pair<int, double>> row;
      if (v == 0.0) {
        row.emplace_back(index_of(tv, 0.0), 1.0);
      } else {
        const double stay = kept[a] / m.probs()[a];
        if (stay > 0.0) row.emplace_back(index_of(tv, v), stay);
        if (stay < 1.0) row.emplace_back(index_of(tv, 0.0), 1.0 - stay);
      }
      out.coupling.items[i].push_back(std::move(row));
    }
    marginals.push_back(std::move(target));
  }
  out.dist = ProductDistribution{std::move(marginals), d.k};
  return out;
}

Discretized full_discretize(const ProductDistribution& d, const DiscretizationParams& params) {
  DiscretizationParams value_params = params;
  value_params.delta = params.delta * params.k;
  require(value_params.delta < 1.0, ErrorCode::kInvalidArgument, "k * delta must be below 1");
  Discretized first = value_discretize(d, value_params);
  Discretized second = prob_discretize(first.dist, params);
  return Discretized{std::move(second.dist), first.coupling.then(second.coupling)};
}

double delta_bound(const ProductDistribution& d, const ProductDistribution& d2, const Coupling& c,
                   DeltaMode mode, const DiscretizationParams& params, std::uint64_t cap) {
  if (mode == DeltaMode::kAnalytic) {
    const Estimate val = val_expectation(d, ExpectationMode::kExact, {}, cap);
    return params.delta * (val.value + params.rev_proxy);
  }
  const std::vector<std::vector<PairAtom>> atoms = pair_atoms(d, d2, c);
  BigCount size = BigCount::of(1);
  for (const auto& a : atoms) size = size * BigCount::of(a.size());
  require(size.fits(cap), ErrorCode::kSupportTooLarge, "coupled support exceeds the enumeration cap");
  const int n = d.n();
  std::vector<double> terms;
  std::vector<std::size_t> digit(n, 0);
  std::vector<double> fwd(n);
  std::vector<double> bwd(n);
  for (std::uint64_t idx = 0; idx < size.value; ++idx) {
    double prob = 1.0;
    for (int i = 0; i < n; ++i) {
      const PairAtom& p = atoms[i][digit[i]];
      prob *= p.prob;
      fwd[i] = p.v - p.v2;
      bwd[i] = p.v2 - p.v;
    }
    terms.push_back(prob * (top_k_positive(fwd, d.k) + top_k_positive(bwd, d.k)));
    for (int i = n - 1; i >= 0; --i) {
      if (++digit[i] < atoms[i].size()) break;
      digit[i] = 0;
    }
  }
  return exact_sum(terms);
}

Estimate delta_m(const ProductDistribution& d, const ProductDistribution& d2, const Coupling& c,
                 const SymmetricMenu& m, const DeltaMConfig& config) {
  require(m.n == d.n() && d.n() == d2.n(), ErrorCode::kLengthMismatch,
          "menu and distributions differ in item count");
  const Estimate fwd = menu_gap(d, partner_means(d, d2, c, false), m, config);
  DeltaMConfig rev_config = config;
  rev_config.mc.seed = config.mc.seed + 1;
  const Estimate bwd = menu_gap(d2, partner_means(d, d2, c, true), m, rev_config);
  return Estimate{fwd.value + bwd.value, std::hypot(fwd.std_error, bwd.std_error), fwd.exact && bwd.exact};
}

}  // namespace menuforge
