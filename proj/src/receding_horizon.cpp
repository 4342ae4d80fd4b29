#include "sis/receding_horizon.hpp"

#include <mutex>
#include <string>
#include <unordered_map>

#include "sis/errors.hpp"

namespace sis::rhc {

InfoState observe_to_info(const Configuration& x) {
  InfoState s(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) s[i] = kInf;
  return s;
}

StepResult rhc_step(const TemporalNetwork& net, const ControlEffect& eff, const Configuration& x_t,
                    std::size_t t, std::size_t T, double c, const RhcOptions& opts,
                    const ControlSchedule* warm_start) {
  if (t >= T) throw ArgumentError("receding-horizon step must satisfy t < T");
  auto sol = mp::fixed_point_solve(net, eff, observe_to_info(x_t), t, T, c, opts.solver,
                                   opts.warm_start ? warm_start : nullptr);
  StepResult out{sol.schedule.front(), std::move(sol.schedule), std::move(sol.report)};
  return out;
}

namespace {

struct Decision {
  Action action;
  ControlSchedule schedule;
  StepSummary summary;
};

StepSummary summarize(const mp::SolveReport& r) {
  return {r.iterations, r.converged, r.termination, r.cost, r.count(mp::Verdict::Interior),
          r.count(mp::Verdict::Inconsistent)};
}

std::string memo_key(std::size_t t, const Configuration& x, const ControlSchedule* warm) {
  std::string key = std::to_string(t) + ':' + x.to_string() + ':';
  if (warm)
    for (const auto& a : *warm) key += a.to_string();
  return key;
}

class DecisionCache {
 public:
  explicit DecisionCache(bool enabled) : enabled_(enabled) {}

  template <class Solve>
  Decision get(const std::string& key, Solve&& solve) {
    if (!enabled_) return solve();
    {
      std::lock_guard lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    Decision d = solve();
    std::lock_guard lock(mutex_);
    if (map_.size() < kMaxEntries) map_.emplace(key, d);
    return d;
  }

 private:
  static constexpr std::size_t kMaxEntries = 1 << 18;
  bool enabled_;
  std::mutex mutex_;
  std::unordered_map<std::string, Decision> map_;
};

}  // namespace

RunResult rhc_run(const TemporalNetwork& net, const ControlEffect& eff,
                                     const Configuration& x0, double c, std::uint64_t master_seed,
                                     std::size_t replications, const RunOptions& opts) {
  const std::size_t T = net.horizon();
  std::vector<std::vector<StepSummary>> logs(replications);
  DecisionCache cache(opts.memoize);

  auto rollout = exact::simulate_closed_loop(
      net, eff, x0, c, master_seed, replications, {opts.threads, opts.keep_traces}, [&](std::size_t r) {
        return [&, r, previous = ControlSchedule{}](std::size_t t, const Configuration& x) mutable {
          ControlSchedule shifted;
          const ControlSchedule* warm = nullptr;
          if (opts.rhc.warm_start && t > 0) {
            shifted.assign(previous.begin() + 1, previous.end());
            warm = &shifted;
          }
          Decision d = cache.get(memo_key(t, x, warm), [&] {
            auto step = rhc_step(net, eff, x, t, T, c, opts.rhc, warm);
            return Decision{step.action, std::move(step.schedule), summarize(step.report)};
          });
          logs[r].push_back(d.summary);
          previous = std::move(d.schedule);
          return d.action;
        };
      });

  RunResult result;
  result.action_counts = std::move(rollout.action_counts);
  auto& traces = result.traces;
  traces.resize(replications);
  for (std::size_t r = 0; r < replications; ++r) {
    auto& tr = traces[r];
    tr.cost = rollout.costs[r];
    tr.protections = rollout.protections[r];
    for (const auto& s : logs[r]) {
      tr.solver_iterations += s.iterations;
      tr.unconverged_steps += !s.converged;
    }
    if (opts.keep_traces) {
      tr.states = std::move(rollout.traces[r].states);
      tr.actions = std::move(rollout.traces[r].actions);
      tr.solves = std::move(logs[r]);
    }
  }
  return result;
}

}  // namespace sis::rhc
