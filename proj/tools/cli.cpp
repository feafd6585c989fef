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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "menuforge/barrier.hpp"
#include "menuforge/benchmarks.hpp"
#include "menuforge/bucketizer.hpp"
#include "menuforge/discretize.hpp"
#include "menuforge/error.hpp"
#include "menuforge/io.hpp"
#include "menuforge/oracle.hpp"
#include "menuforge/parallel.hpp"
#include "menuforge/reduction.hpp"
#include "menuforge/symmetric_lp.hpp"

namespace menuforge::cli {

namespace {

void setup_logging() {
  auto logger = spdlog::get("menuforge");
  if (!logger) {
    logger = spdlog::stderr_color_st("menuforge");
    logger->set_pattern("[%l] %v");
  }
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("MENUFORGE_LOG")) {
    const std::string name = env;
    if (name == "error" || name == "warn" || name == "info" || name == "debug") {
      level = spdlog::level::from_str(name);
    } else {
      spdlog::warn("ignoring MENUFORGE_LOG={}; expected error, warn, info or debug", name);
    }
  }
  logger->set_level(level);
}

int exit_code_for(ErrorCode code) {
  if (is_budget_error(code)) return kExitBudget;
  switch (code) {
    case ErrorCode::kNumericalFailure:
    case ErrorCode::kSeparationFailed:
      return kExitFailure;
    default:
      return kExitInvalid;
  }
}

void check_config(const RunConfig& c) {
  if (c.epsilon) {
    require(*c.epsilon > 0.0 && *c.epsilon < 1.0, ErrorCode::kInvalidArgument,
            "--epsilon must lie in (0,1), got " + std::to_string(*c.epsilon));
  }
  if (c.samples) require(*c.samples >= 2, ErrorCode::kInvalidArgument, "--samples must be at least 2");
  if (c.support_cap) require(*c.support_cap >= 1, ErrorCode::kInvalidArgument, "--support-cap must be positive");
  require(c.rep_cap >= 1, ErrorCode::kInvalidArgument, "--rep-cap must be positive");
  require(c.oracle_cap >= 1, ErrorCode::kInvalidArgument, "--oracle-cap must be positive");
  require(c.max_options >= 1, ErrorCode::kInvalidArgument, "--max-options must be positive");
  require(c.tolerance > 0.0 && c.tolerance < 1e-2, ErrorCode::kInvalidArgument,
          "--tolerance must lie in (0, 0.01)");
  require(c.safety > 0.0 && std::isfinite(c.safety), ErrorCode::kInvalidArgument,
          "--safety-factor must be positive");
  require(c.threads >= 0, ErrorCode::kInvalidArgument, "--threads must be non-negative");
}

Instance load_instance(const RunConfig& c) {
  require(!c.input.empty(), ErrorCode::kInvalidArgument, c.subcommand + " needs an instance file (-i)");
  Instance inst = instance_from_json(read_json_file(c.input));
  spdlog::info("loaded {} items (k = {}) from {}", inst.dist.n(), inst.dist.k, c.input);
  return inst;
}

Json group_to_json(const ItemGroup& g) { return Json(g.blocks()); }

Json priced_to_json(const PricedRevenue& p) {
  return Json{{"prices", prices_to_json(p.prices)}, {"revenue", p.revenue}};
}

Json bundle_to_json(const BundleResult& b) {
  return Json{{"price", b.price}, {"revenue", b.revenue}, {"exact", b.exact}};
}

Estimate menu_revenue(const SymmetricMenu& m, const ProductDistribution& d, std::uint64_t cap,
                      const McConfig& mc) {
  if (support_size(d).fits(cap)) return Estimate{revenue_exact(m, d, cap), 0.0, true};
  spdlog::info("support exceeds {}; estimating revenue from {} samples", cap, mc.samples);
  return revenue_mc(m, d, mc);
}

McConfig mc_of(const RunConfig& c, std::uint64_t default_samples, std::uint64_t stream = 0) {
  return McConfig{c.samples.value_or(default_samples), c.seed + stream};
}

Json cmd_solve(const RunConfig& c) {
  const Instance inst = load_instance(c);
  SolveConfig sc;
  sc.rep_cap = c.rep_cap;
  sc.lp.tolerance = c.tolerance;
  const ModRevSolution sol = solve_modrev(inst.dist, inst.weights, sc);
  Json r;
  r["objective"] = sol.objective;
  r["revenue"] = estimate_to_json(
      menu_revenue(sol.menu, inst.dist, c.support_cap.value_or(kDefaultSupportCap), mc_of(c, 100'000)));
  r["leftovers"] = leftovers(sol.menu);
  r["group"] = group_to_json(sol.menu.components.empty() ? ItemGroup::trivial(inst.dist.n())
                                                          : sol.menu.components.front().group);
  r["rep_count"] = sol.rep_count;
  r["pivots"] = sol.pivots;
  r["complexity"] = complexity_to_json(complexity_measures(sol.menu));
  r["menu"] = menu_to_json(sol.menu);
  return r;
}

Json cmd_oracle(const RunConfig& c) {
  const Instance inst = load_instance(c);
  LPOptions lp;
  lp.tolerance = c.tolerance;
  const ModRevSolution sol =
      brute_force_optimal(inst.dist, inst.weights, c.support_cap.value_or(kDefaultOracleCap), lp);
  Json r;
  r["objective"] = sol.objective;
  r["revenue"] = revenue_exact(sol.menu, inst.dist);
  r["leftovers"] = leftovers(sol.menu);
  r["support_points"] = sol.rep_count;
  r["pivots"] = sol.pivots;
  r["complexity"] = complexity_to_json(complexity_measures(sol.menu));
  r["menu"] = menu_to_json(sol.menu);
  return r;
}

Json cmd_reduce(const RunConfig& c) {
  const Instance inst = load_instance(c);
  const double eps = c.epsilon.value_or(0.1);
  ReductionConfig rc;
  rc.safety = c.safety;
  rc.solve.rep_cap = c.rep_cap;
  rc.solve.lp.tolerance = c.tolerance;
  rc.support_cap = c.support_cap.value_or(kDefaultSupportCap);
  rc.brev.mc = mc_of(c, 100'000);
  rc.brev.support_cap = rc.support_cap;
  rc.mc = mc_of(c, 100'000, 1);
  rc.run_oracle = c.oracle;
  rc.oracle_cap = c.oracle_cap;
  const ReductionReport rep = run_reduction(inst.dist, eps, rc);
  const ReductionParams& p = rep.params;

  Json r;
  r["provenance"] = Json{{"eps", eps},
                         {"safety_factor", p.safety},
                         {"srev_star_lower", p.srev_star_lower},
                         {"brev", p.brev},
                         {"R_hat", p.rev_proxy},
                         {"H", p.h},
                         {"E", p.e},
                         {"T", p.t},
                         {"t_factor", rep.t_factor},
                         {"delta", rep.delta}};
  Json reserves = Json::array();
  for (const auto& x : p.reserve) reserves.push_back(x ? Json(*x) : Json(nullptr));
  r["tail_revenue"] = p.tail_revenue;
  r["reserve"] = std::move(reserves);
  r["weights"] = p.w;
  r["weights_discretized"] = rep.w_discretized;
  r["degenerate"] = rep.degenerate;
  r["weight_shortcut"] = rep.weight_shortcut;
  r["group"] = group_to_json(rep.group);
  r["rep_count"] = rep.rep_count;
  r["pivots"] = rep.pivots;
  r["bounded_objective"] = rep.bounded_objective;
  r["exclusive_appended"] = rep.exclusive_appended;
  r["revenue"] = estimate_to_json(rep.revenue);
  r["oracle_revenue"] = rep.oracle_revenue ? Json(*rep.oracle_revenue) : Json(nullptr);
  r["ratio"] = rep.ratio ? Json(*rep.ratio) : Json(nullptr);
  r["complexity_bounded"] = complexity_to_json(rep.complexity_bounded);
  r["complexity_final"] = complexity_to_json(rep.complexity_final);
  r["bounded_menu"] = menu_to_json(rep.bounded_menu);
  r["final_menu"] = menu_to_json(rep.final_menu);
  return r;
}

Json cmd_bench(const RunConfig& c) {
  const Instance inst = load_instance(c);
  BrevConfig bc;
  bc.mc = mc_of(c, 100'000);
  bc.support_cap = c.support_cap.value_or(kDefaultSupportCap);
  const BenchmarkReport b = benchmark_report(inst.dist, bc, bc.support_cap);
  Json r;
  r["srev"] = b.srev ? priced_to_json(*b.srev) : Json(nullptr);
  r["brev"] = bundle_to_json(b.brev);
  r["srev_star_lower"] = priced_to_json(b.srev_star_lower);
  r["srev_star_exact"] = b.srev_star_exact ? priced_to_json(*b.srev_star_exact) : Json(nullptr);
  Json mono = Json::array();
  for (const MonopolyResult& m : b.per_item_monopoly) {
    mono.push_back(Json{{"price", m.price ? Json(*m.price) : Json(nullptr)}, {"revenue", m.revenue}});
  }
  r["per_item_monopoly"] = std::move(mono);
  return r;
}

Json bucket_to_json(const Bucket& b) { return Json{{"items", b.items}, {"price", b.price}}; }

Json cmd_bucketize(const RunConfig& c) {
  const Instance inst = load_instance(c);
  require(inst.dist.additive(), ErrorCode::kUnsupportedClass, "bucketize needs an additive instance (k = n)");
  const double eps = c.epsilon.value_or(0.25);
  const SalePlan plan = separate_sale_plan(inst.dist);
  const BucketMechanism bm = build_buckets(plan.p, plan.q, eps);
  validate_buckets(bm);
  const std::uint64_t cap = c.support_cap.value_or(kDefaultSupportCap);
  Estimate revenue;
  try {
    revenue = bucket_revenue(bm, inst.dist, EvalMode::kExact, {}, cap);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBudgetExceeded) throw;
    spdlog::info("joint bundle too large to convolve; sampling");
    revenue = bucket_revenue(bm, inst.dist, EvalMode::kMonteCarlo, mc_of(c, 100'000));
  }

  Json r;
  r["eps"] = eps;
  r["sale_prices"] = plan.p;
  r["sale_probs"] = plan.q;
  r["sale_revenue"] = bm.sale_revenue;
  r["revenue_target"] = (1.0 - eps) * bm.sale_revenue;
  r["revenue"] = estimate_to_json(revenue);
  Json b0 = Json::array();
  for (const PricedItem& it : bm.b0) b0.push_back(Json{{"item", it.item}, {"price", it.price}});
  r["b0"] = std::move(b0);
  Json buckets = Json::array();
  for (const Bucket& b : bm.buckets) buckets.push_back(bucket_to_json(b));
  r["buckets"] = std::move(buckets);
  r["joint"] = bm.joint ? bucket_to_json(*bm.joint) : Json(nullptr);
  r["dropped"] = bm.dropped;
  r["bucket_count"] = bm.buckets.size();
  r["bucket_count_bound"] = bucket_count_bound(plan.q, eps);
  r["declared_ssmc"] = count_to_json(bucket_declared_ssmc(bm));
  try {
    r["menu"] = menu_to_json(bucket_to_menu(bm, c.max_options));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kMenuTooLarge) throw;
    spdlog::warn("{}", e.what());
    r["menu"] = nullptr;
  }
  return r;
}

Json cmd_eval(const RunConfig& c) {
  const Instance inst = load_instance(c);
  require(!c.menu.empty(), ErrorCode::kInvalidArgument, "eval needs a menu file (--menu)");
  const Json mj = read_json_file(c.menu);
  // A solve or reduce report is accepted in place of a bare menu.
  const Json& body = mj.contains("final_menu") ? mj["final_menu"] : mj.contains("menu") ? mj["menu"] : mj;
  const SymmetricMenu m = menu_from_json(body);
  require(m.n == inst.dist.n(), ErrorCode::kLengthMismatch,
          "menu has " + std::to_string(m.n) + " items, instance " + std::to_string(inst.dist.n()));
  validate_menu(m, inst.dist.k);
  const std::uint64_t cap = c.support_cap.value_or(kDefaultSupportCap);
  Json r;
  r["revenue"] = estimate_to_json(menu_revenue(m, inst.dist, cap, mc_of(c, 100'000)));
  r["leftovers"] = leftovers(m);
  if (support_size(inst.dist).fits(cap)) {
    r["modrev_objective"] = modrev_objective(m, inst.dist, inst.weights, cap);
  } else {
    r["modrev_objective"] = nullptr;
  }
  r["complexity"] = complexity_to_json(complexity_measures(m));
  return r;
}

Json cmd_discretize(const RunConfig& c) {
  const Instance inst = load_instance(c);
  const ProductDistribution& d = inst.dist;
  const double delta = c.epsilon.value_or(0.1);
  BrevConfig bc;
  bc.mc = mc_of(c, 100'000);
  bc.support_cap = c.support_cap.value_or(kDefaultSupportCap);
  const ReductionParams p = select_params(d, delta, c.safety, bc);
  double top = 0.0;
  for (const Marginal& m : d.marginals) top = std::max(top, m.max_value());

  DiscretizationParams dp;
  dp.delta = delta;
  dp.rev_proxy = p.rev_proxy;
  dp.t = top / p.rev_proxy;
  dp.k = d.k;
  dp.n = d.n();
  const Discretized disc = full_discretize(d, dp);
  Json r;
  r["provenance"] = Json{{"delta", delta}, {"R_hat", p.rev_proxy}, {"t_factor", dp.t}, {"T", top}};
  r["delta_analytic"] = delta_bound(d, disc.dist, disc.coupling, DeltaMode::kAnalytic, dp);
  if (support_size(d).fits(bc.support_cap) && support_size(disc.dist).fits(bc.support_cap)) {
    r["delta_exact"] = delta_bound(d, disc.dist, disc.coupling, DeltaMode::kExactEnumerate, dp, bc.support_cap);
  } else {
    r["delta_exact"] = nullptr;
  }
  Json sizes = Json::array();
  for (const Marginal& m : disc.dist.marginals) sizes.push_back(m.size());
  r["atoms_per_item"] = std::move(sizes);
  const Instance out{disc.dist, inst.weights};
  if (!c.instance_out.empty()) write_text_file(c.instance_out, dump_json(instance_to_json(out)));
  r["instance"] = instance_to_json(out);
  return r;
}

Json cmd_barrier(const RunConfig& c) {
  const double eps = c.epsilon.value_or(1.0 / 9.0);
  const BarrierInstance inst = gen_barrier(c.items, eps, c.seed, 10'000'000, c.k_override);
  spdlog::info("barrier vectors accepted after {} draws", inst.spec.draws);
  const BarrierFeatures f = check_features(inst.dist, inst.spec, mc_of(c, 10'000));
  if (!c.instance_out.empty()) {
    write_text_file(c.instance_out, dump_json(instance_to_json(Instance{inst.dist, {}})));
  }
  Json r;
  r["provenance"] = Json{{"n", inst.spec.n}, {"eps", eps}, {"k", inst.spec.k}, {"draws", inst.spec.draws}};
  r["val"] = f.val;
  r["val_target"] = f.val_target;
  r["val_ok"] = f.val_ok;
  r["separate_revenue"] = f.separate_revenue;
  r["separate_target"] = f.separate_target;
  r["separate_ok"] = f.separate_ok;
  r["srev"] = f.srev;
  r["max_grid_revenue"] = f.max_grid_revenue;
  r["grid_bound"] = f.grid_bound;
  r["grid_ok"] = f.grid_ok;
  r["max_value"] = f.max_value;
  r["values_bounded"] = f.values_bounded;
  r["masses_valid"] = f.masses_valid;
  r["min_zero_mass"] = f.min_zero_mass;
  r["min_separation"] = f.min_separation;
  r["separation_ok"] = f.separation_ok;
  r["brev_in_sample"] = bundle_to_json(f.brev_in_sample);
  r["brev_holdout"] = estimate_to_json(f.brev_holdout);
  r["exact_checks_ok"] = f.exact_checks_ok();
  return r;
}

Json cmd_complexity(const RunConfig& c) {
  require(!c.input.empty(), ErrorCode::kInvalidArgument, "complexity needs a menu file (-i)");
  const Json mj = read_json_file(c.input);
  const Json& body = mj.contains("final_menu") ? mj["final_menu"] : mj.contains("menu") ? mj["menu"] : mj;
  const SymmetricMenu m = menu_from_json(body);
  Json r;
  r["components"] = m.components.size();
  r["listed_options"] = m.option_count();
  r["complexity"] = complexity_to_json(complexity_measures(m));
  return r;
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, os);
  } else {
    os << prefix << ": " << j.dump() << "\n";
  }
}

std::string render(const Json& report, const std::string& format) {
  if (format == "json") return dump_json(report);
  std::ostringstream os;
  flatten(report, "", os);
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  setup_logging();
  RunConfig c;
  CLI::App app{"Revenue-optimal menus for a single additive or k-demand buyer", "menuforge"};
  app.require_subcommand(1, 1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", c.output, "Report file (default: stdout)");
    sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  };
  auto input = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("-i,--input", c.input, what)->required();
  };
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Seed for every random stream");
    sub->add_option("--samples", c.samples, "Monte Carlo samples");
  };
  auto eps = [&](CLI::App* sub, const std::string& what) { sub->add_option("--epsilon", c.epsilon, what); };
  auto support = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--support-cap", c.support_cap, what);
  };
  auto lp = [&](CLI::App* sub) {
    sub->add_option("--tolerance", c.tolerance, "LP feasibility tolerance");
  };

  std::map<std::string, std::function<Json(const RunConfig&)>> handlers;
  auto add = [&](const std::string& name, const std::string& help, std::function<Json(const RunConfig&)> fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    handlers[name] = std::move(fn);
    return sub;
  };

  CLI::App* solve = add("solve", "Solve the symmetric ModRevMax program", cmd_solve);
  input(solve, "Instance file");
  sampling(solve);
  lp(solve);
  support(solve, "Largest joint support evaluated exactly");
  solve->add_option("--rep-cap", c.rep_cap, "Largest number of canonical representatives");

  CLI::App* oracle = add("oracle", "Solve ModRevMax over the full joint support", cmd_oracle);
  input(oracle, "Instance file");
  lp(oracle);
  support(oracle, "Largest joint support (default 2000)");

  CLI::App* reduce = add("reduce", "Run the bounded-instance reduction end to end", cmd_reduce);
  input(reduce, "Instance file");
  eps(reduce, "Approximation parameter (default 0.1)");
  sampling(reduce);
  lp(reduce);
  support(reduce, "Largest joint support evaluated exactly");
  reduce->add_option("--rep-cap", c.rep_cap, "Largest number of canonical representatives");
  reduce->add_option("--safety-factor", c.safety, "Multiplier on SRev* in H");
  reduce->add_option("--oracle-cap", c.oracle_cap, "Largest joint support for the oracle comparison");
  reduce->add_flag("!--no-oracle", c.oracle, "Skip the oracle comparison");

  CLI::App* bench = add("bench", "Selling-separately, exclusive and bundle benchmarks", cmd_bench);
  input(bench, "Instance file");
  sampling(bench);
  support(bench, "Largest joint support enumerated exactly");

  CLI::App* bucketize = add("bucketize", "Bucket mechanism for an additive buyer", cmd_bucketize);
  input(bucketize, "Additive instance file");
  eps(bucketize, "Bucket parameter (default 0.25)");
  sampling(bucketize);
  support(bucketize, "Largest number of joint-bundle sums convolved exactly");
  bucketize->add_option("--max-options", c.max_options, "Largest menu written out");

  CLI::App* eval = add("eval", "Revenue and complexity of a menu", cmd_eval);
  input(eval, "Instance file");
  eval->add_option("--menu", c.menu, "Menu file, or a solve/reduce report")->required();
  sampling(eval);
  support(eval, "Largest joint support evaluated exactly");

  CLI::App* discretize = add("discretize", "Round values and probabilities to geometric grids", cmd_discretize);
  input(discretize, "Instance file");
  eps(discretize, "Rounding parameter delta (default 0.1)");
  sampling(discretize);
  support(discretize, "Largest joint support enumerated exactly");
  discretize->add_option("--safety-factor", c.safety, "Multiplier on SRev* in H");
  discretize->add_option("--instance-out", c.instance_out, "Write the discretized instance here");

  CLI::App* barrier = add("barrier", "Generate and check the barrier instance", cmd_barrier);
  barrier->add_option("--items", c.items, "Number of items (even, at least 64)");
  eps(barrier, "Barrier parameter (default 1/9)");
  sampling(barrier);
  barrier->add_option("--k-override", c.k_override, "Vector length instead of the rounded default");
  barrier->add_option("--instance-out", c.instance_out, "Write the instance here");

  CLI::App* complexity = add("complexity", "Menu complexity measures", cmd_complexity);
  input(complexity, "Menu file, or a solve/reduce report");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    check_config(c);
    set_num_threads(c.threads);
    const auto start = std::chrono::steady_clock::now();
    Json report;
    report["command"] = c.subcommand;
    report["seed"] = c.seed;
    report.update(handlers.at(c.subcommand)(c));
    const std::string text = render(report, c.format);
    if (c.output.empty()) {
      out << text;
    } else {
      write_text_file(c.output, text);
    }
    spdlog::info("{} finished in {:.3f} s", c.subcommand,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return kExitOk;
  } catch (const Error& e) {
    err << "menuforge " << c.subcommand << ": " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "menuforge " << c.subcommand << ": " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace menuforge::cli
