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

#include "menuforge/oracle.hpp"

#include <string>

#include "menuforge/error.hpp"

namespace menuforge {

ModRevSolution brute_force_optimal(const ProductDistribution& d, const std::vector<double>& w,
                                   std::uint64_t cap, const LPOptions& lp) {
  const BigCount size = support_size(d);
  require(size.fits(cap), ErrorCode::kSupportTooLarge,
          "oracle support exceeds the cap of " + std::to_string(cap) + " points");
  SolveConfig config;
  config.rep_cap = cap;
  config.lp = lp;
  config.group = ItemGroup::trivial(d.n());
  return solve_modrev(d, w, config);
}

}  // namespace menuforge
