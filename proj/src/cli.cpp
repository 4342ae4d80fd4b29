#include "sis/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sis/bench.hpp"
#include "sis/errors.hpp"
#include "sis/exact_markov.hpp"
#include "sis/mdp.hpp"
#include "sis/min_principle.hpp"
#include "sis/parallel.hpp"
#include "sis/receding_horizon.hpp"
#include "sis/scenario.hpp"
#include "sis/transnn.hpp"

namespace sis::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

/// Absolute slack allowed in bound comparisons.
constexpr double kBoundTolerance = 1e-12;

struct RunConfig {
  std::string subcommand;
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t replications = 1;
  std::size_t max_iter = 50;
  std::size_t dp_cap = exact::kDefaultStateCap;
  unsigned threads = 0;
  std::optional<double> c;
  std::optional<double> beta;
  bool no_warm_start = false;
  // bench
  std::string sweep = "compare";
  std::vector<std::size_t> n_list{1, 2, 3, 4, 5, 6};
  std::vector<std::size_t> T_list{2, 4, 6, 8, 10};
  std::size_t nodes = 5;
  std::size_t horizon = kDefaultHorizon;
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

/// Canonical command line reproducing a run; echoed into every output header.
std::string canonical_argv(const RunConfig& cfg) {
  std::ostringstream a;
  a << kToolName << ' ' << cfg.subcommand;
  if (!cfg.scenario.empty()) a << " --scenario " << cfg.scenario;
  a << " --out " << cfg.out;
  if (cfg.seed) a << " --seed " << *cfg.seed;
  a << " --replications " << cfg.replications << " --threads " << cfg.threads << " --max-iter " << cfg.max_iter
    << " --dp-cap " << cfg.dp_cap;
  if (cfg.c) a << " --c " << num(*cfg.c);
  if (cfg.beta) a << " --beta " << num(*cfg.beta);
  if (cfg.no_warm_start) a << " --no-warm-start";
  if (cfg.subcommand == "bench") {
    a << " --sweep " << cfg.sweep << " --n-list " << join(cfg.n_list) << " --T-list " << join(cfg.T_list)
      << " --nodes " << cfg.nodes << " --horizon " << cfg.horizon;
  }
  return a.str();
}

ojson config_json(const RunConfig& cfg) {
  ojson j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["subcommand"] = cfg.subcommand;
  j["scenario"] = cfg.scenario;
  j["seed"] = cfg.seed ? ojson(*cfg.seed) : ojson(nullptr);
  j["replications"] = cfg.replications;
  j["threads"] = cfg.threads;
  j["max_iter"] = cfg.max_iter;
  j["dp_cap"] = cfg.dp_cap;
  j["c"] = cfg.c ? ojson(*cfg.c) : ojson(nullptr);
  j["beta"] = cfg.beta ? ojson(*cfg.beta) : ojson(nullptr);
  j["warm_start"] = !cfg.no_warm_start;
  j["argv"] = canonical_argv(cfg);
  return j;
}

/// CSV file with a '#'-prefixed header block.
class CsvFile {
 public:
  CsvFile(const fs::path& path, const RunConfig& cfg, const std::string& columns) : out_(path) {
    if (!out_) throw ArgumentError(path.string() + ": cannot open for writing");
    out_ << "# " << kToolName << ' ' << kVersion << '\n';
    out_ << "# argv: " << canonical_argv(cfg) << '\n';
    out_ << "# config: " << config_json(cfg).dump() << '\n';
    out_ << columns << '\n';
  }
  std::ostream& row() { return out_; }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const RunConfig& cfg, ojson body) {
  ojson doc;
  doc["header"] = config_json(cfg);
  for (auto& [k, v] : body.items()) doc[k] = v;
  std::ofstream out(path);
  if (!out) throw ArgumentError(path.string() + ": cannot open for writing");
  out << doc.dump(2) << '\n';
}

struct Loaded {
  Scenario sc;
  ControlEffect eff;
};

Loaded load(RunConfig& cfg) {
  if (cfg.scenario.empty()) throw ArgumentError("--scenario is required for '" + cfg.subcommand + "'");
  Scenario sc = load_scenario(cfg.scenario);
  if (cfg.c) sc.cost = *cfg.c;
  if (cfg.beta) sc.beta = *cfg.beta;
  if (!(sc.cost >= 0.0)) throw ArgumentError("--c must be non-negative");
  cfg.c = sc.cost;
  cfg.beta = sc.beta;
  return {sc, sc.effect()};
}

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw ArgumentError("--seed is required for the stochastic subcommand '" + cfg.subcommand + "'");
  return *cfg.seed;
}

fs::path out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  return dir;
}

int cmd_simulate(RunConfig& cfg, std::ostream& out) {
  auto [sc, eff] = load(cfg);
  const auto seed = require_seed(cfg);
  const auto& x0 = sc.initial_configuration();
  const std::size_t n = sc.size(), T = sc.horizon();
  const auto res = exact::schedule_rollout(sc.network, eff, zero_schedule(n, T), x0, sc.cost, seed,
                                           cfg.replications, {cfg.threads, true});
  const auto dir = out_dir(cfg);
  CsvFile trace(dir / "trace.csv", cfg, "replication,k,node,x");
  CsvFile summary(dir / "summary.csv", cfg, "replication,realized_cost,infected_at_T");
  for (std::size_t r = 0; r < cfg.replications; ++r) {
    const auto& states = res.traces[r].states;
    for (std::size_t k = 0; k <= T; ++k)
      for (std::size_t i = 0; i < n; ++i) trace.row() << r << ',' << k << ',' << i << ',' << states[k][i] << '\n';
    summary.row() << r << ',' << num(res.costs[r]) << ',' << states.back().count() << '\n';
  }
  out << "simulated " << cfg.replications << " replication(s) of " << T << " steps\n";
  return kOk;
}

int cmd_exact_marginals(RunConfig& cfg, std::ostream& out) {
  auto [sc, eff] = load(cfg);
  const std::size_t n = sc.size(), T = sc.horizon();
  exact::check_state_cap(n, cfg.dp_cap);
  const auto p0 = sc.initial_probabilities();
  const auto marg = exact::marginal_trajectory(sc.network, eff, exact::DistributionVector::product(p0),
                                               zero_schedule(n, T), cfg.dp_cap);
  CsvFile csv(out_dir(cfg) / "marginals.csv", cfg, "k,node,p");
  for (std::size_t k = 0; k <= T; ++k)
    for (std::size_t i = 0; i < n; ++i) csv.row() << k << ',' << i << ',' << num(marg[k][i]) << '\n';
  out << "exact marginals over 2^" << n << " configurations for " << T << " steps\n";
  return kOk;
}

int cmd_mdp(RunConfig& cfg, std::ostream& out) {
  auto [sc, eff] = load(cfg);
  const std::size_t n = sc.size(), T = sc.horizon();
  const auto policy = exact::mdp_solve(sc.network, eff, sc.cost, T, {cfg.dp_cap, cfg.threads});
  const auto dir = out_dir(cfg);

  ojson table = ojson::object();
  for (std::size_t k = 0; k < T; ++k) table[std::to_string(k)] = policy.action[k];
  write_json(dir / "policy.json", cfg, {{"n", n}, {"T", T}, {"encoding", "bit i of an index is node i"},
                                        {"policy", table}});
  CsvFile values(dir / "values.csv", cfg, "k,state_index,value");
  for (std::size_t k = 0; k <= T; ++k)
    for (std::size_t x = 0; x < policy.value[k].size(); ++x)
      values.row() << k << ',' << x << ',' << num(policy.value[k][x]) << '\n';

  if (sc.deterministic_start()) {
    const auto& x0 = sc.initial_configuration();
    out << "V_0(" << x0.to_string() << ") = " << num(policy.value_at(0, x0)) << '\n';
    if (cfg.seed) {
      const auto res = exact::policy_rollout(sc.network, eff, policy, x0, sc.cost, *cfg.seed, cfg.replications,
                                             {cfg.threads, true});
      CsvFile trace(dir / "rollout.csv", cfg, "replication,t,node,x,u");
      CsvFile summary(dir / "rollout_summary.csv", cfg, "replication,realized_cost,total_protections");
      for (std::size_t r = 0; r < cfg.replications; ++r) {
        const auto& tr = res.traces[r];
        for (std::size_t t = 0; t <= T; ++t)
          for (std::size_t i = 0; i < n; ++i) {
            trace.row() << r << ',' << t << ',' << i << ',' << tr.states[t][i] << ',';
            if (t < T) trace.row() << tr.actions[t][i];
            trace.row() << '\n';
          }
        summary.row() << r << ',' << num(res.costs[r]) << ',' << res.protections[r] << '\n';
      }
    }
  }
  return kOk;
}

int cmd_transnn(RunConfig& cfg, std::ostream& out) {
  auto [sc, eff] = load(cfg);
  const std::size_t n = sc.size(), T = sc.horizon();
  const auto s0 = transnn::to_info(sc.initial_probabilities());
  const auto s = transnn::trajectory_info(sc.network, eff, s0, zero_schedule(n, T), 0, T);
  CsvFile csv(out_dir(cfg) / "transnn.csv", cfg, "k,node,p,s");
  for (std::size_t k = 0; k <= T; ++k)
    for (std::size_t i = 0; i < n; ++i)
      csv.row() << k << ',' << i << ',' << num(transnn::to_prob(s[k][i])) << ',' << num(s[k][i]) << '\n';
  out << "TransNN trajectory for " << T << " steps\n";
  return kOk;
}

ojson report_json(const mp::SolveReport& r) {
  ojson checks = ojson::array();
  for (const auto& g : r.checks)
    checks.push_back({{"k", g.k}, {"node", g.node}, {"grad_at_0", num(g.grad_at_0)}, {"grad_at_1", num(g.grad_at_1)},
                      {"verdict", mp::to_string(g.verdict)}});
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"termination", mp::to_string(r.termination)},
          {"J2", r.cost},
          {"cost_history", r.cost_history},
          {"max_degree", r.max_degree},
          {"interior", r.count(mp::Verdict::Interior)},
          {"inconsistent", r.count(mp::Verdict::Inconsistent)},
          {"checks", checks}};
}

int cmd_opt_ctrl(RunConfig& cfg, std::ostream& out) {
  auto [sc, eff] = load(cfg);
  const std::size_t n = sc.size(), T = sc.horizon();
  const auto s0 = transnn::to_info(sc.initial_probabilities());
  const auto sol = mp::fixed_point_solve(sc.network, eff, s0, 0, T, sc.cost, {cfg.max_iter});
  const auto dir = out_dir(cfg);
  CsvFile sched(dir / "schedule.csv", cfg, "k,node,u");
  CsvFile states(dir / "states.csv", cfg, "k,node,p,s");
  CsvFile adjoint(dir / "adjoint.csv", cfg, "k,node,lambda");
  for (std::size_t k = 0; k <= T; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (k < T) sched.row() << k << ',' << i << ',' << sol.schedule[k][i] << '\n';
      states.row() << k << ',' << i << ',' << num(transnn::to_prob(sol.states[k][i])) << ',' << num(sol.states[k][i])
                   << '\n';
      adjoint.row() << k << ',' << i << ',' << num(sol.adjoint[k][i]) << '\n';
    }
  write_json(dir / "report.json", cfg, report_json(sol.report));
  out << "J2 = " << num(sol.report.cost) << " after " << sol.report.iterations << " iteration(s) ("
      << mp::to_string(sol.report.termination) << "), " << total_protections(sol.schedule) << " protection(s)\n";
  return kOk;
}

int cmd_rhc(RunConfig& cfg, std::ostream& out) {
  auto [sc, eff] = load(cfg);
  const auto seed = require_seed(cfg);
  const std::size_t n = sc.size(), T = sc.horizon();
  rhc::RunOptions opts;
  opts.rhc.solver.max_iter = cfg.max_iter;
  opts.rhc.warm_start = !cfg.no_warm_start;
  opts.threads = cfg.threads;
  const auto res = rhc::rhc_run(sc.network, eff, sc.initial_configuration(), sc.cost, seed, cfg.replications, opts);
  const auto dir = out_dir(cfg);
  CsvFile trace(dir / "rhc_trace.csv", cfg, "replication,t,node,x,u");
  CsvFile summary(dir / "rhc_summary.csv", cfg, "replication,realized_cost,total_protections,solver_iters");
  double total = 0.0;
  for (std::size_t r = 0; r < cfg.replications; ++r) {
    const auto& tr = res.traces[r];
    for (std::size_t t = 0; t <= T; ++t)
      for (std::size_t i = 0; i < n; ++i) {
        trace.row() << r << ',' << t << ',' << i << ',' << tr.states[t][i] << ',';
        if (t < T) trace.row() << tr.actions[t][i];
        trace.row() << '\n';
      }
    summary.row() << r << ',' << num(tr.cost) << ',' << tr.protections << ',' << tr.solver_iterations << '\n';
    total += tr.cost;
  }
  out << "mean realized cost " << num(total / static_cast<double>(std::max<std::size_t>(1, cfg.replications)))
      << " over " << cfg.replications << " replication(s)\n";
  return kOk;
}

int cmd_bench(RunConfig& cfg, std::ostream& out) {
  const auto seed = require_seed(cfg);
  bench::BenchConfig bc;
  bc.replications = std::max<std::size_t>(cfg.replications, 2);
  cfg.replications = bc.replications;
  bc.seed = seed;
  bc.threads = cfg.threads;
  bc.state_cap = cfg.dp_cap;
  bc.solver.max_iter = cfg.max_iter;
  if (cfg.c) bc.scenario.cost = *cfg.c;
  if (cfg.beta) bc.scenario.beta = *cfg.beta;

  auto scenario = [&] {
    if (!cfg.scenario.empty()) return load(cfg).sc;
    RandomScenarioSpec spec = bc.scenario;
    spec.network.n = cfg.nodes;
    spec.network.horizon = cfg.horizon;
    return random_scenario(spec, seed);
  };

  std::vector<bench::BenchRecord> recs;
  if (cfg.sweep == "n") {
    recs = bench::sweep_n(cfg.n_list, cfg.horizon, bc);
  } else if (cfg.sweep == "T") {
    recs = bench::sweep_T(scenario(), cfg.T_list, bc);
  } else if (cfg.sweep == "compare") {
    const Scenario sc = scenario();
    recs = bench::bench_scenario(sc, bc, {bench::Method::MDP, bench::Method::OptCtrl, bench::Method::RHC});
    const auto cmp = bench::compare_costs(sc, seed, bc.replications, bc);
    out << "protections: OptCtrl schedule " << cmp.optctrl_schedule_protections << ", RHC mean "
        << num(cmp.rhc.mean_protections);
    if (cmp.mdp.ran) out << ", MDP mean " << num(cmp.mdp.mean_protections);
    out << "\ninclusion in OptCtrl actions: RHC " << num(cmp.rhc_in_optctrl);
    if (cmp.mdp.ran) out << ", MDP " << num(cmp.mdp_in_optctrl);
    out << '\n';
  } else {
    throw ArgumentError("--sweep must be one of n, T, compare");
  }

  if (cfg.out.empty()) throw ArgumentError("--out is required for 'bench'");
  if (fs::path(cfg.out).has_parent_path()) fs::create_directories(fs::path(cfg.out).parent_path());
  CsvFile csv(cfg.out, cfg, bench::kCsvColumns);
  for (const auto& r : recs) {
    bench::write_csv_row(csv.row(), r);
    out << bench::to_string(r.method) << " n=" << r.n << " T=" << r.T << " time=" << num(r.wall_time_s)
        << "s cost=" << num(r.mean_cost) << "+-" << num(r.cost_se) << (r.status == "ok" ? "" : " [" + r.status + "]")
        << '\n';
  }
  out << "reference timings for the 5-node example on a laptop: MDP 16.72 s, OptCtrl 0.020 s, RHC 0.094 s\n";
  return kOk;
}

int cmd_verify_bounds(RunConfig& cfg, std::ostream& out) {
  auto [sc, eff] = load(cfg);
  const std::size_t n = sc.size(), T = sc.horizon();
  exact::check_state_cap(n, cfg.dp_cap);
  const auto p0 = sc.initial_probabilities();
  const auto zero = zero_schedule(n, T);
  const auto exact_p = exact::marginal_trajectory(sc.network, eff, exact::DistributionVector::product(p0), zero,
                                                  cfg.dp_cap);
  const auto prob = transnn::trajectory_prob(sc.network, eff, p0, zero, 0, T);
  const auto info = transnn::trajectory_info(sc.network, eff, transnn::to_info(p0), zero, 0, T);
  const auto linear = transnn::linear_bound_trajectory(sc.network, p0, T);

  double min_gap_transnn = kInf, min_gap_linear = kInf, max_conjugacy = 0.0, max_one_step = 0.0;
  CsvFile csv(out_dir(cfg) / "bounds.csv", cfg, "k,node,exact,transnn,info_prob,linear");
  for (std::size_t k = 0; k <= T; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const double ip = transnn::to_prob(info[k][i]);
      min_gap_transnn = std::min(min_gap_transnn, prob[k][i] - exact_p[k][i]);
      min_gap_linear = std::min(min_gap_linear, linear[k][i] - prob[k][i]);
      max_conjugacy = std::max(max_conjugacy, std::abs(ip - prob[k][i]));
      if (k == 1 && sc.deterministic_start()) max_one_step = std::max(max_one_step, std::abs(prob[k][i] - exact_p[k][i]));
      csv.row() << k << ',' << i << ',' << num(exact_p[k][i]) << ',' << num(prob[k][i]) << ',' << num(ip) << ','
                << num(linear[k][i]) << '\n';
    }
  const bool ok = min_gap_transnn >= -kBoundTolerance && min_gap_linear >= -kBoundTolerance &&
                  max_conjugacy <= kBoundTolerance && max_one_step <= kBoundTolerance;
  write_json(out_dir(cfg) / "report.json", cfg,
             {{"tolerance", kBoundTolerance},
              {"min_gap_transnn_minus_exact", min_gap_transnn},
              {"min_gap_linear_minus_transnn", min_gap_linear},
              {"max_conjugacy_error", max_conjugacy},
              {"max_one_step_error", max_one_step},
              {"deterministic_start", sc.deterministic_start()},
              {"ok", ok}});
  out << "min(TransNN - exact) = " << num(min_gap_transnn) << ", min(linear - TransNN) = " << num(min_gap_linear)
      << ", max conjugacy error = " << num(max_conjugacy) << ", one-step error = " << num(max_one_step) << '\n';
  out << (ok ? "bounds hold\n" : "BOUND VIOLATION\n");
  return ok ? kOk : kBoundViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and TransNN-based analysis and control of SIS spread on temporal networks", kToolName};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool stochastic) {
    sub->add_option("--scenario", cfg.scenario, "scenario file (JSON)");
    sub->add_option("--out", cfg.out, "output directory")->default_val(".");
    sub->add_option("--max-iter", cfg.max_iter, "fixed-point iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--dp-cap", cfg.dp_cap, "largest n for exact 2^n computations");
    sub->add_option("--threads", cfg.threads, std::string("worker threads (default: $") + kThreadsEnv + " or 1)");
    sub->add_option("--c", cfg.c, "override the per-infection cost");
    sub->add_option("--beta", cfg.beta, "override the protection retention factor")->check(CLI::Range(0.0, 1.0));
    if (stochastic) {
      sub->add_option("--seed", cfg.seed, "master seed");
      sub->add_option("--replications", cfg.replications, "Monte Carlo replications");
    }
  };

  common(app.add_subcommand("simulate", "sample uncontrolled trajectories of the exact chain"), true);
  common(app.add_subcommand("exact-marginals", "exact infection marginals by 2^n distribution evolution"), false);
  common(app.add_subcommand("mdp", "dynamic-programming policy over all configurations"), true);
  common(app.add_subcommand("transnn", "TransNN probability and information-content trajectory"), false);
  common(app.add_subcommand("opt-ctrl", "open-loop TransNN optimal control via the minimum principle"), false);
  auto* rhc_cmd = app.add_subcommand("rhc", "TransNN receding horizon control in closed loop");
  common(rhc_cmd, true);
  rhc_cmd->add_flag("--no-warm-start", cfg.no_warm_start, "solve every horizon from the all-zero schedule");
  auto* bench_cmd = app.add_subcommand("bench", "timing and cost comparisons");
  common(bench_cmd, true);
  bench_cmd->add_option("--sweep", cfg.sweep, "n | T | compare")->check(CLI::IsMember({"n", "T", "compare"}));
  bench_cmd->add_option("--n-list", cfg.n_list, "node counts for --sweep n")->delimiter(',');
  bench_cmd->add_option("--T-list", cfg.T_list, "horizons for --sweep T")->delimiter(',');
  bench_cmd->add_option("--nodes", cfg.nodes, "size of the generated scenario when --scenario is absent");
  bench_cmd->add_option("--horizon", cfg.horizon, "horizon for --sweep n and generated scenarios");
  common(app.add_subcommand("verify-bounds", "check exact <= TransNN <= linear bound along a scenario"), false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kArgumentError;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.threads = resolve_threads(cfg.threads);

  try {
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg, out);
    if (cfg.subcommand == "exact-marginals") return cmd_exact_marginals(cfg, out);
    if (cfg.subcommand == "mdp") return cmd_mdp(cfg, out);
    if (cfg.subcommand == "transnn") return cmd_transnn(cfg, out);
    if (cfg.subcommand == "opt-ctrl") return cmd_opt_ctrl(cfg, out);
    if (cfg.subcommand == "rhc") return cmd_rhc(cfg, out);
    if (cfg.subcommand == "bench") return cmd_bench(cfg, out);
    if (cfg.subcommand == "verify-bounds") return cmd_verify_bounds(cfg, out);
  } catch (const CapabilityError& e) {
    err << kToolName << ": capability: " << e.what() << '\n';
    return kCapabilityError;
  } catch (const ArgumentError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::exception& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kFailure;
  }
  return kArgumentError;
}

}  // namespace sis::cli
