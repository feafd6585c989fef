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

#include <optional>
#include <vector>

#include "menuforge/lp.hpp"

namespace menuforge::testing {

// Maximum of the objective over all basic feasible solutions of a model whose
// variables all have lower bound 0 and no upper bound. Returns nullopt when no
// vertex is feasible. Only meaningful for bounded models with a handful of
// variables; every subset of active constraints is tried.
std::optional<double> bfs_enumerate_max(const LPModel& model, double feas_tol = 1e-9);

}  // namespace menuforge::testing
