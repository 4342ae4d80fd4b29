#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "sis/bits.hpp"
#include "sis/network.hpp"

namespace sis {

/// p_i: probability that node i is infected.
using ProbState = std::vector<double>;
/// s_i = -log(1 - p_i) in [0, +inf]; +inf is an exact value.
using InfoState = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace transnn {

/// TlogSigmoid link activation Psi(w, x) = -log(1 - w + w e^{-x}).
/// w in [0,1] is the activation level, x in [0, +inf] the input signal.
/// Psi(w, +inf) = -log(1 - w), which is +inf only for w = 1.
double tlogsigmoid(double w, double x);

/// d Psi / d x = w e^{-x} / (1 - w + w e^{-x}), in [0, w]. Returns 0 at
/// x = +inf (including the w = 1 corner).
double dtlogsigmoid_ds(double w, double x);

/// d Psi / d w = (1 - e^{-x}) / (1 - w + w e^{-x}); +inf when w = 1 and x = +inf.
double dtlogsigmoid_dw(double w, double x);

double to_info(double p);
double to_prob(double s);
InfoState to_info(const ProbState& p);
ProbState to_prob(const InfoState& s);

/// One step of the probability recursion
///   p'_i = 1 - prod_{j in N_i^k} (1 - m_ij^k(u_i) p_j).
ProbState step_prob(const TemporalNetwork& net, const ControlEffect& eff, const ProbState& p,
                    const Action& u, std::size_t k);

/// Equivalent information-content step s'_i = sum_j Psi(m_ij^k(u_i), s_j).
InfoState step_info(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s,
                    const Action& u, std::size_t k);

/// States at k = t0, ..., T (size T - t0 + 1). u[h] applies at step t0 + h
/// and must hold T - t0 actions.
std::vector<ProbState> trajectory_prob(const TemporalNetwork& net, const ControlEffect& eff,
                                       const ProbState& start, const ControlSchedule& u,
                                       std::size_t t0, std::size_t T);
std::vector<InfoState> trajectory_info(const TemporalNetwork& net, const ControlEffect& eff,
                                       const InfoState& start, const ControlSchedule& u,
                                       std::size_t t0, std::size_t T);

/// [(A_{K-1} o W_{K-1}) ... (A_0 o W_0) mu0] with uncontrolled weights and
/// self-loops on the diagonal. Not clamped to [0,1]: it is a bound.
ProbState linear_upper_bound(const TemporalNetwork& net, const ProbState& mu0, std::size_t K);

/// The bound at every K = 0, ..., T.
std::vector<ProbState> linear_bound_trajectory(const TemporalNetwork& net, const ProbState& mu0,
                                               std::size_t T);

}  // namespace transnn
}  // namespace sis
