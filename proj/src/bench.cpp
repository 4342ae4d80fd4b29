#include "sis/bench.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "sis/errors.hpp"
#include "sis/mdp.hpp"
#include "sis/receding_horizon.hpp"

namespace sis::bench {

std::string to_string(Method m) {
  switch (m) {
    case Method::MDP: return "MDP";
    case Method::OptCtrl: return "OptCtrl";
    case Method::RHC: return "RHC";
  }
  return "?";
}

namespace {

bool wants(const std::vector<Method>& methods, Method m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

double inclusion(const std::vector<std::size_t>& counts, const ControlSchedule& reference, std::size_t n) {
  double inside = 0.0, total = 0.0;
  for (std::size_t t = 0; t < reference.size(); ++t)
    for (std::size_t i = 0; i < n; ++i) {
      const double c = static_cast<double>(counts[t * n + i]);
      total += c;
      if (reference[t][i]) inside += c;
    }
  return total > 0.0 ? inside / total : 1.0;
}

MethodSummary summarize(const std::vector<double>& costs, const std::vector<std::size_t>& protections) {
  MethodSummary s;
  s.ran = true;
  s.cost = mean_se(costs);
  double sum = 0.0;
  for (auto p : protections) sum += static_cast<double>(p);
  s.mean_protections = protections.empty() ? 0.0 : sum / static_cast<double>(protections.size());
  return s;
}

}  // namespace

std::vector<BenchRecord> bench_scenario(const Scenario& sc, const BenchConfig& cfg,
                                        const std::vector<Method>& methods) {
  if (cfg.replications < 2) throw ArgumentError("benchmarks need at least 2 replications for a standard error");
  const auto& net = sc.network;
  const auto eff = sc.effect();
  const auto& x0 = sc.initial_configuration();
  const std::size_t n = net.size(), T = net.horizon();
  const exact::RolloutOptions rollout{cfg.threads, false};

  auto record = [&](Method m) {
    BenchRecord r;
    r.method = m;
    r.n = n;
    r.T = T;
    r.d = net.max_degree();
    r.replications = cfg.replications;
    r.seed = cfg.seed;
    r.threads = cfg.threads;
    return r;
  };

  std::vector<BenchRecord> out;
  if (wants(methods, Method::MDP)) {
    BenchRecord r = record(Method::MDP);
    if (n > cfg.state_cap) {
      r.status = "capability";
      r.replications = 0;
    } else {
      exact::MdpPolicy policy;
      r.wall_time_s = time_median(
          [&] { policy = exact::mdp_solve(net, eff, sc.cost, T, {cfg.state_cap, cfg.threads}); },
          cfg.timing_runs, cfg.min_sample_seconds);
      const auto res = exact::policy_rollout(net, eff, policy, x0, sc.cost, cfg.seed, cfg.replications, rollout);
      const auto st = mean_se(res.costs);
      r.mean_cost = st.mean;
      r.cost_se = st.se;
    }
    out.push_back(r);
  }
  if (wants(methods, Method::OptCtrl)) {
    BenchRecord r = record(Method::OptCtrl);
    mp::Solution sol;
    const auto s0 = transnn::to_info(sc.initial_probabilities());
    r.wall_time_s = time_median([&] { sol = mp::fixed_point_solve(net, eff, s0, 0, T, sc.cost, cfg.solver); },
                                cfg.timing_runs, cfg.min_sample_seconds);
    const auto res = exact::schedule_rollout(net, eff, sol.schedule, x0, sc.cost, cfg.seed, cfg.replications, rollout);
    const auto st = mean_se(res.costs);
    r.mean_cost = st.mean;
    r.cost_se = st.se;
    out.push_back(r);
  }
  if (wants(methods, Method::RHC)) {
    BenchRecord r = record(Method::RHC);
    rhc::RunOptions once;
    once.rhc.solver = cfg.solver;
    once.keep_traces = false;
    once.memoize = false;
    r.wall_time_s = time_median([&] { (void)rhc::rhc_run(net, eff, x0, sc.cost, cfg.seed, 1, once); },
                                cfg.timing_runs, cfg.min_sample_seconds);
    rhc::RunOptions many = once;
    many.threads = cfg.threads;
    many.memoize = true;
    const auto res = rhc::rhc_run(net, eff, x0, sc.cost, cfg.seed, cfg.replications, many);
    std::vector<double> costs;
    for (const auto& tr : res.traces) costs.push_back(tr.cost);
    const auto st = mean_se(costs);
    r.mean_cost = st.mean;
    r.cost_se = st.se;
    out.push_back(r);
  }
  return out;
}

std::vector<BenchRecord> sweep_n(const std::vector<std::size_t>& ns, std::size_t T, const BenchConfig& cfg,
                                 const std::vector<Method>& methods) {
  std::vector<BenchRecord> out;
  for (std::size_t n : ns) {
    RandomScenarioSpec spec = cfg.scenario;
    spec.network.n = n;
    spec.network.horizon = T;
    const Scenario sc = random_scenario(spec, derive_seed(cfg.seed, n));
    auto recs = bench_scenario(sc, cfg, methods);
    out.insert(out.end(), recs.begin(), recs.end());
  }
  return out;
}

std::vector<BenchRecord> sweep_T(const Scenario& sc, const std::vector<std::size_t>& Ts, const BenchConfig& cfg,
                                 const std::vector<Method>& methods) {
  std::vector<BenchRecord> out;
  for (std::size_t T : Ts) {
    Scenario at = sc;
    at.network = sc.network.with_horizon(T);
    auto recs = bench_scenario(at, cfg, methods);
    out.insert(out.end(), recs.begin(), recs.end());
  }
  return out;
}

CompareSummary compare_costs(const Scenario& sc, std::uint64_t seed, std::size_t replications,
                             const BenchConfig& cfg) {
  const auto& net = sc.network;
  const auto eff = sc.effect();
  const auto& x0 = sc.initial_configuration();
  const std::size_t n = net.size(), T = net.horizon();
  const exact::RolloutOptions rollout{cfg.threads, false};

  CompareSummary out;
  const auto open_loop = mp::fixed_point_solve(net, eff, rhc::observe_to_info(x0), 0, T, sc.cost, cfg.solver);
  out.optctrl_schedule_protections = total_protections(open_loop.schedule);
  const auto ol = exact::schedule_rollout(net, eff, open_loop.schedule, x0, sc.cost, seed, replications, rollout);
  out.optctrl = summarize(ol.costs, ol.protections);

  rhc::RunOptions ro;
  ro.rhc.solver = cfg.solver;
  ro.threads = cfg.threads;
  ro.keep_traces = false;
  const auto rh = rhc::rhc_run(net, eff, x0, sc.cost, seed, replications, ro);
  std::vector<double> costs;
  std::vector<std::size_t> prot;
  for (const auto& tr : rh.traces) {
    costs.push_back(tr.cost);
    prot.push_back(tr.protections);
  }
  out.rhc = summarize(costs, prot);
  out.rhc_in_optctrl = inclusion(rh.action_counts, open_loop.schedule, n);

  if (n <= cfg.state_cap) {
    const auto policy = exact::mdp_solve(net, eff, sc.cost, T, {cfg.state_cap, cfg.threads});
    const auto md = exact::policy_rollout(net, eff, policy, x0, sc.cost, seed, replications, rollout);
    out.mdp = summarize(md.costs, md.protections);
    out.mdp_in_optctrl = inclusion(md.action_counts, open_loop.schedule, n);
  }
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("slope fit needs at least two paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void write_csv_row(std::ostream& out, const BenchRecord& r) {
  char time[32], mean[32], se[32];
  std::snprintf(time, sizeof time, "%.9g", r.wall_time_s);
  std::snprintf(mean, sizeof mean, "%.17g", r.mean_cost);
  std::snprintf(se, sizeof se, "%.17g", r.cost_se);
  out << to_string(r.method) << ',' << r.n << ',' << r.T << ',' << r.d << ',' << time << ',' << mean << ','
      << se << ',' << r.replications << ',' << r.seed << ',' << r.threads << ',' << r.status << '\n';
}

}  // namespace sis::bench
