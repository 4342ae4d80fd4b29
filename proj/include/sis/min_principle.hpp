#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sis/bits.hpp"
#include "sis/network.hpp"
#include "sis/transnn.hpp"

namespace sis::mp {

using AdjointState = std::vector<double>;

/// Outcome of comparing dH/du_i at u_i = 0 and u_i = 1 for one (k, i).
enum class Verdict {
  BoundaryOptimal,  // both gradients share a sign that selects the applied action
  Interior,         // sign change: the relaxed minimizer is strictly inside (0, 1)
  Inconsistent,     // shared sign, but it selects the other boundary
};

std::string to_string(Verdict v);

struct GradientCheck {
  std::size_t k = 0;
  std::size_t node = 0;
  double grad_at_0 = 0.0;
  double grad_at_1 = 0.0;
  Verdict verdict = Verdict::BoundaryOptimal;
};

enum class Termination { FixedPoint, TwoCycle, IterationLimit };

std::string to_string(Termination t);

struct SolveReport {
  std::size_t iterations = 0;  // forward/backward sweeps performed
  bool converged = false;      // the control update reproduced its input
  Termination termination = Termination::IterationLimit;
  double cost = 0.0;           // J2 of the returned schedule
  std::vector<double> cost_history;  // J2 of every iterate, in order
  std::size_t max_degree = 0;
  std::vector<GradientCheck> checks;  // one per (k, i), k-major

  std::size_t count(Verdict v) const;
};

struct SolverOptions {
  std::size_t max_iter = 50;
};

struct Solution {
  ControlSchedule schedule;           // actions for k = t0 .. T-1
  std::vector<InfoState> states;      // s(t0) .. s(T)
  std::vector<AdjointState> adjoint;  // lambda(t0) .. lambda(T), lambda(T) = 0
  SolveReport report;
};

/// J2 = sum_k 1'(c (1 - e^{-s(k)}) + u(k)) over the schedule's steps;
/// states must hold one more entry than the schedule.
double cost_j2(const std::vector<InfoState>& states, const ControlSchedule& u, double c);

/// Hamiltonian at step k for a relaxed control u in [0,1]^n.
double hamiltonian(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s,
                   const AdjointState& lambda_next, std::span<const double> u, std::size_t k, double c);

/// lambda_i(k) = c e^{-s_i(k)} + sum_{l in out(i)} lambda_l(k+1) dPsi/ds(m_li^k(u_l), s_i(k)).
AdjointState adjoint_step(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s_k,
                          const AdjointState& lambda_next, const Action& u_k, std::size_t k, double c);

/// Backward sweep lambda(T) = 0 .. lambda(t0) along `states` under `u`.
std::vector<AdjointState> adjoint_sweep(const TemporalNetwork& net, const ControlEffect& eff,
                                        const std::vector<InfoState>& states, const ControlSchedule& u,
                                        std::size_t t0, double c);

/// H|_{u_i=1} - H|_{u_i=0}:
///   1 - lambda_i(k+1) sum_j log[(1 - w b + w b e^{-s_j}) / (1 - w + w e^{-s_j})].
std::vector<double> delta_h(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s_k,
                            const AdjointState& lambda_next, std::size_t k);

/// u_i = 1 iff delta_h_i < 0.
Action control_rule(std::span<const double> delta_h);

/// dH/du_i at u_i = 0 and u_i = 1 for every (k, i) along a solution.
std::vector<GradientCheck> boundary_gradient_check(const TemporalNetwork& net, const ControlEffect& eff,
                                                   const std::vector<InfoState>& states,
                                                   const std::vector<AdjointState>& adjoint,
                                                   const ControlSchedule& u, std::size_t t0);

/// Forward/backward sweep iteration on the state, adjoint and control
/// equations over {t0, ..., T}, starting from `warm_start` (all-zero when
/// null). Stops at a fixed point, a 2-cycle, or max_iter; always returns the
/// lowest-J2 iterate seen.
Solution fixed_point_solve(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s0,
                           std::size_t t0, std::size_t T, double c, const SolverOptions& opts = {},
                           const ControlSchedule* warm_start = nullptr);

}  // namespace sis::mp
