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

#include "menuforge/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "menuforge/error.hpp"

namespace menuforge {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  require(j.is_object(), ErrorCode::kParseError, where + " must be an object");
  const auto it = j.find(key);
  require(it != j.end(), ErrorCode::kParseError, where + " lacks \"" + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  require(j.is_number(), ErrorCode::kParseError, where + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  require(j.is_number_integer(), ErrorCode::kParseError, where + " must be an integer");
  const auto v = j.get<std::int64_t>();
  require(v >= 0 && v <= (1 << 30), ErrorCode::kParseError, where + " is out of range");
  return static_cast<int>(v);
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  require(j.is_array(), ErrorCode::kParseError, where + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> integers(const Json& j, const std::string& where) {
  require(j.is_array(), ErrorCode::kParseError, where + " must be an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

Instance instance_from_json(const Json& j) {
  const Json& ms = field(j, "marginals", "instance");
  require(ms.is_array(), ErrorCode::kParseError, "\"marginals\" must be an array");
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> probs;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const std::string where = "marginal " + std::to_string(i);
    values.push_back(numbers(field(ms[i], "values", where), where + " values"));
    probs.push_back(numbers(field(ms[i], "probs", where), where + " probs"));
  }
  const int n = static_cast<int>(ms.size());
  if (j.contains("n")) {
    require(integer(j["n"], "\"n\"") == n, ErrorCode::kLengthMismatch,
            "\"n\" is " + j["n"].dump() + " but " + std::to_string(n) + " marginals are listed");
  }
  const int k = j.contains("k") ? integer(j["k"], "\"k\"") : n;
  Instance inst{make_product(values, probs, k), {}};
  if (j.contains("weights")) {
    inst.weights = numbers(j["weights"], "\"weights\"");
    require(static_cast<int>(inst.weights.size()) == n, ErrorCode::kLengthMismatch,
            "\"weights\" has " + std::to_string(inst.weights.size()) + " entries for " + std::to_string(n) +
                " items");
    for (std::size_t i = 0; i < inst.weights.size(); ++i) {
      require(std::isfinite(inst.weights[i]) && inst.weights[i] >= 0.0, ErrorCode::kInvalidArgument,
              "weight " + std::to_string(i) + " must be finite and non-negative");
    }
  } else {
    inst.weights.assign(n, 0.0);
  }
  return inst;
}

Json instance_to_json(const Instance& inst) {
  Json j;
  j["n"] = inst.dist.n();
  j["k"] = inst.dist.k;
  Json ms = Json::array();
  for (const Marginal& m : inst.dist.marginals) {
    ms.push_back(Json{{"values", m.values()}, {"probs", m.probs()}});
  }
  j["marginals"] = std::move(ms);
  if (std::any_of(inst.weights.begin(), inst.weights.end(), [](double w) { return w != 0.0; })) {
    j["weights"] = inst.weights;
  }
  return j;
}

SymmetricMenu menu_from_json(const Json& j) {
  SymmetricMenu m;
  m.n = integer(field(j, "n", "menu"), "menu \"n\"");
  require(m.n >= 1, ErrorCode::kParseError, "menu \"n\" must be positive");
  const Json& cs = field(j, "components", "menu");
  require(cs.is_array(), ErrorCode::kParseError, "\"components\" must be an array");
  for (std::size_t c = 0; c < cs.size(); ++c) {
    const std::string where = "component " + std::to_string(c);
    const Json& bs = field(cs[c], "blocks", where);
    require(bs.is_array(), ErrorCode::kParseError, where + " blocks must be an array");
    std::vector<std::vector<int>> blocks;
    for (std::size_t b = 0; b < bs.size(); ++b) {
      blocks.push_back(integers(bs[b], where + " block " + std::to_string(b)));
    }
    SymmetricComponent comp{ItemGroup(m.n, std::move(blocks)), {}};
    const Json& os = field(cs[c], "options", where);
    require(os.is_array(), ErrorCode::kParseError, where + " options must be an array");
    for (std::size_t o = 0; o < os.size(); ++o) {
      const std::string ow = where + " option " + std::to_string(o);
      comp.options.push_back(
          MenuOption{numbers(field(os[o], "x", ow), ow + " x"), number(field(os[o], "price", ow), ow + " price")});
    }
    m.components.push_back(std::move(comp));
  }
  validate_menu(m, m.n);
  return m;
}

Json menu_to_json(const SymmetricMenu& m) {
  Json cs = Json::array();
  for (const SymmetricComponent& c : m.components) {
    Json os = Json::array();
    for (const MenuOption& o : c.options) os.push_back(Json{{"x", o.x}, {"price", o.price}});
    cs.push_back(Json{{"blocks", c.group.blocks()}, {"options", std::move(os)}});
  }
  return Json{{"n", m.n}, {"components", std::move(cs)}};
}

Json estimate_to_json(const Estimate& e) {
  return Json{{"value", e.value}, {"std_error", e.std_error}, {"exact", e.exact}};
}

Json count_to_json(const BigCount& c) { return c.overflow ? Json("overflow") : Json(c.value); }

Json complexity_to_json(const ComplexityReport& c) {
  return Json{{"mc", count_to_json(c.mc)}, {"declared_ssmc", count_to_json(c.declared_ssmc)},
              {"declared_wsmc", c.declared_wsmc}};
}

Json prices_to_json(const std::vector<double>& prices) {
  Json j = Json::array();
  for (double p : prices) j.push_back(std::isfinite(p) ? Json(p) : Json(nullptr));
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kParseError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::kInvalidArgument, "cannot write " + path.string());
  out << text;
  require(out.good(), ErrorCode::kInvalidArgument, "failed writing " + path.string());
}

}  // namespace menuforge
