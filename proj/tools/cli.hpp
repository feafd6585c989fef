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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace menuforge::cli {

// Flags shared by the subcommands. Unset optionals take the subcommand's
// default.
struct RunConfig {
  std::string subcommand;
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> samples;
  double tolerance = 1e-9;
  std::optional<std::uint64_t> support_cap;
  std::uint64_t rep_cap = 1000;
  std::uint64_t oracle_cap = 2000;
  std::uint64_t max_options = 1'000'000;
  bool oracle = true;
  std::string input;
  std::string output;
  std::string menu;
  std::string instance_out;
  std::string format = "json";
  int threads = 0;
  double safety = 2.0;
  int items = 1000;
  std::optional<int> k_override;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

// Parses argv (program name first), runs one subcommand and returns the exit
// code. Reports go to --output, or to `out` when none is given; diagnostics
// go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace menuforge::cli
