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
#include <utility>
#include <vector>

#include "menuforge/dist.hpp"
#include "menuforge/menu.hpp"

namespace menuforge {

struct DiscretizationParams {
  double delta = 0.1;      // in (0,1)
  double t = 1.0;          // boundedness factor: all values <= t * rev_proxy
  double rev_proxy = 1.0;  // stands in for Rev(D)
  int k = 1;
  int n = 1;
};

// Item-wise coupling between a source and a target distribution:
// items[i][a] lists (target atom index, conditional probability) for source
// atom a of item i. Items are coupled independently.
struct Coupling {
  std::vector<std::vector<std::vector<std::pair<int, double>>>> items;

  static Coupling identity(const ProductDistribution& d);
  // First this coupling, then `next` (whose sources are this coupling's targets).
  Coupling then(const Coupling& next) const;
};

// Checks conditional rows sum to 1 and that the coupling reproduces the
// target marginals within tol.
void validate_coupling(const ProductDistribution& src, const ProductDistribution& dst,
                       const Coupling& c, double tol = 1e-9);

struct Discretized {
  ProductDistribution dist;
  Coupling coupling;
};

// Largest top * base^e (integer e >= 0) that is <= v, for 0 < v <= top and
// base in (0,1). Never rounds up.
double round_down_to_power(double v, double top, double base);

// Values rounded down to t * R * (1-delta)^e; values below delta * R / k map
// to 0. Throws kBoundednessViolated for values above t * R.
Discretized value_discretize(const ProductDistribution& d, const DiscretizationParams& params);

// Probabilities of nonzero atoms rounded down to powers of (1-delta), or to 0
// below delta^2 / n^2; the removed mass moves to value 0. The coupling keeps a
// value with probability q'/q and sends it to 0 otherwise.
Discretized prob_discretize(const ProductDistribution& d, const DiscretizationParams& params);

// Value discretization with parameter k*delta followed by probability
// discretization with parameter delta, with the composed coupling.
Discretized full_discretize(const ProductDistribution& d, const DiscretizationParams& params);

enum class DeltaMode { kExactEnumerate, kAnalytic };

// Coupling error E[max_S (v(S) - v'(S)) + max_S (v'(S) - v(S))]. For k-demand
// valuations max_S (v(S) - v'(S)) is the sum of the k largest positive
// entries of v - v', for any coupling. kAnalytic returns delta * (Val + R).
double delta_bound(const ProductDistribution& d, const ProductDistribution& d2, const Coupling& c,
                   DeltaMode mode, const DiscretizationParams& params = {},
                   std::uint64_t cap = kDefaultSupportCap);

struct DeltaMConfig {
  bool monte_carlo = false;
  McConfig mc;
  std::uint64_t cap = kDefaultSupportCap;
};

// Menu-restricted coupling error: for each v the best menu allocation against
// E[v - v' | v], plus the same with the roles of v and v' swapped.
Estimate delta_m(const ProductDistribution& d, const ProductDistribution& d2, const Coupling& c,
                 const SymmetricMenu& m, const DeltaMConfig& config = {});

}  // namespace menuforge
