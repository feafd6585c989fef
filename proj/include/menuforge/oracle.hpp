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
#include <vector>

#include "menuforge/symmetric_lp.hpp"

namespace menuforge {

inline constexpr std::uint64_t kDefaultOracleCap = 2000;

// Exact ModRevMax optimum over the full support (trivial group). Throws
// kSupportTooLarge above cap.
ModRevSolution brute_force_optimal(const ProductDistribution& d, const std::vector<double>& w,
                                   std::uint64_t cap = kDefaultOracleCap, const LPOptions& lp = {});

}  // namespace menuforge
