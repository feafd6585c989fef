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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "menuforge/benchmarks.hpp"
#include "menuforge/dist.hpp"
#include "menuforge/menu.hpp"
#include "menuforge/numeric.hpp"

namespace menuforge {

using Json = nlohmann::ordered_json;

// An instance file: the distribution plus optional leftover weights.
//   {"n": 2, "k": 2,
//    "marginals": [{"values": [0, 1], "probs": [0.5, 0.5]}, ...],
//    "weights": [0, 0]}
// "k" defaults to n (additive) and "weights" to zeros.
struct Instance {
  ProductDistribution dist;
  std::vector<double> weights;
  bool operator==(const Instance& o) const = default;
};

// Parse failures throw kParseError naming the offending field; invalid
// marginals throw the distribution's own errors, which name the marginal.
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& inst);

//   {"n": 3, "components": [{"blocks": [[0, 1], [2]],
//                            "options": [{"x": [...], "price": 1.5}]}]}
// Checked against k = n; callers holding an instance re-validate with its k.
SymmetricMenu menu_from_json(const Json& j);
Json menu_to_json(const SymmetricMenu& m);

Json estimate_to_json(const Estimate& e);
// A number, or the string "overflow".
Json count_to_json(const BigCount& c);
Json complexity_to_json(const ComplexityReport& c);
// Infinite entries (items not offered) become null.
Json prices_to_json(const std::vector<double>& prices);

Json read_json_file(const std::filesystem::path& path);
// Two-space indented, trailing newline. Doubles print in their shortest
// round-tripping form.
std::string dump_json(const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace menuforge
