#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sis/bits.hpp"
#include "sis/exact_markov.hpp"
#include "sis/min_principle.hpp"
#include "sis/network.hpp"

namespace sis::rhc {

/// Perfect observation: s_i = +inf for infected nodes, 0 otherwise.
InfoState observe_to_info(const Configuration& x);

struct RhcOptions {
  mp::SolverOptions solver;
  bool warm_start = true;  // seed each re-solve with the previous schedule shifted by one step
};

/// Compact record of one re-solve.
struct StepSummary {
  std::size_t iterations = 0;
  bool converged = false;
  mp::Termination termination = mp::Termination::IterationLimit;
  double predicted_cost = 0.0;  // J3 over {t, ..., T}
  std::size_t interior = 0;
  std::size_t inconsistent = 0;
};

struct StepResult {
  Action action;             // u*(t), the only action applied
  ControlSchedule schedule;  // full solved schedule over {t, ..., T-1}
  mp::SolveReport report;
};

/// Solves the shrinking-horizon problem over {t, ..., T} from the observed x_t.
StepResult rhc_step(const TemporalNetwork& net, const ControlEffect& eff, const Configuration& x_t,
                    std::size_t t, std::size_t T, double c, const RhcOptions& opts = {},
                    const ControlSchedule* warm_start = nullptr);

struct ClosedLoopTrace {
  // Populated only when traces are kept.
  std::vector<Configuration> states;  // x(0) .. x(T)
  std::vector<Action> actions;        // u(0) .. u(T-1)
  std::vector<StepSummary> solves;    // one per t

  double cost = 0.0;  // realized sum_t 1'(c x(t) + u(t))
  std::size_t protections = 0;
  std::size_t solver_iterations = 0;
  std::size_t unconverged_steps = 0;
};

struct RunOptions {
  RhcOptions rhc;
  unsigned threads = 1;
  bool keep_traces = true;
  /// Reuse solves for identical (t, x_t, warm start) keys; results are unchanged.
  bool memoize = true;
};

struct RunResult {
  std::vector<ClosedLoopTrace> traces;     // one per replication
  std::vector<std::size_t> action_counts;  // [t * n + i]: replications with u_i(t) = 1
};

/// Closed loop against the exact stochastic chain, one substream per
/// (replication, step) derived from master_seed.
RunResult rhc_run(const TemporalNetwork& net, const ControlEffect& eff,
                                     const Configuration& x0, double c, std::uint64_t master_seed,
                                     std::size_t replications, const RunOptions& opts = {});

}  // namespace sis::rhc
