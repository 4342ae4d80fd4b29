#include "sis/transnn.hpp"

#include <cmath>
#include <string>

#include "sis/errors.hpp"

namespace sis::transnn {

namespace {

void check_domain(double w, double x) {
  if (!(w >= 0.0 && w <= 1.0))
    throw ArgumentError("activation level must lie in [0,1], got " + std::to_string(w));
  if (!(x >= 0.0)) throw ArgumentError("signal must lie in [0,+inf], got " + std::to_string(x));
}

void check_schedule(const ControlSchedule& u, std::size_t t0, std::size_t T, std::size_t n) {
  if (T < t0) throw ArgumentError("trajectory end precedes its start");
  if (u.size() != T - t0)
    throw ArgumentError("schedule holds " + std::to_string(u.size()) + " actions, horizon needs " +
                        std::to_string(T - t0));
  for (const auto& a : u)
    if (a.size() != n) throw ArgumentError("action length differs from node count");
}

// Below this the direct form 1 - w + w e^{-x} loses the leading digits of Psi.
constexpr double kSmallActivation = 1e-8;
// Below this factors are multiplied in the log domain.
constexpr double kTinyFactor = 1e-300;

}  // namespace

double tlogsigmoid(double w, double x) {
  check_domain(w, x);
  if (w == 0.0 || x == 0.0) return 0.0;
  if (w == 1.0) return x;
  if (std::isinf(x)) return -std::log1p(-w);
  const double a = -w * std::expm1(-x);  // w (1 - e^{-x})
  if (a < kSmallActivation) return -std::log1p(-a);
  return -std::log((1.0 - w) + w * std::exp(-x));
}

double dtlogsigmoid_ds(double w, double x) {
  check_domain(w, x);
  if (std::isinf(x) || w == 0.0) return 0.0;
  if (w == 1.0) return 1.0;
  const double e = std::exp(-x);
  return w * e / ((1.0 - w) + w * e);
}

double dtlogsigmoid_dw(double w, double x) {
  check_domain(w, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return w == 1.0 ? kInf : 1.0 / (1.0 - w);
  const double e = std::exp(-x);
  return -std::expm1(-x) / ((1.0 - w) + w * e);
}

double to_info(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("probability must lie in [0,1], got " + std::to_string(p));
  return -std::log1p(-p);
}

double to_prob(double s) {
  if (!(s >= 0.0)) throw ArgumentError("information state must lie in [0,+inf], got " + std::to_string(s));
  return -std::expm1(-s);
}

InfoState to_info(const ProbState& p) {
  InfoState s(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) s[i] = to_info(p[i]);
  return s;
}

ProbState to_prob(const InfoState& s) {
  ProbState p(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) p[i] = to_prob(s[i]);
  return p;
}

ProbState step_prob(const TemporalNetwork& net, const ControlEffect& eff, const ProbState& p,
                    const Action& u, std::size_t k) {
  const std::size_t n = net.size();
  if (p.size() != n || u.size() != n) throw ArgumentError("state/action length differs from node count");
  const Snapshot& snap = net.at(k);
  ProbState next(n);
  for (std::size_t i = 0; i < n; ++i) {
    double prod = 1.0;
    bool tiny = false;
    for (const auto& l : snap.incoming(i)) {
      const double f = 1.0 - controlled(l.weight, eff.beta, u[i]) * p[l.node];
      if (f < kTinyFactor) tiny = true;
      prod *= f;
    }
    if (tiny) {
      double log_prod = 0.0;
      for (const auto& l : snap.incoming(i))
        log_prod += std::log1p(-controlled(l.weight, eff.beta, u[i]) * p[l.node]);
      next[i] = -std::expm1(log_prod);
    } else {
      next[i] = 1.0 - prod;
    }
  }
  return next;
}

InfoState step_info(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s,
                    const Action& u, std::size_t k) {
  const std::size_t n = net.size();
  if (s.size() != n || u.size() != n) throw ArgumentError("state/action length differs from node count");
  const Snapshot& snap = net.at(k);
  InfoState next(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& l : snap.incoming(i)) sum += tlogsigmoid(controlled(l.weight, eff.beta, u[i]), s[l.node]);
    next[i] = sum;
  }
  return next;
}

std::vector<ProbState> trajectory_prob(const TemporalNetwork& net, const ControlEffect& eff,
                                       const ProbState& start, const ControlSchedule& u,
                                       std::size_t t0, std::size_t T) {
  check_schedule(u, t0, T, net.size());
  std::vector<ProbState> traj{start};
  traj.reserve(T - t0 + 1);
  for (std::size_t k = t0; k < T; ++k) traj.push_back(step_prob(net, eff, traj.back(), u[k - t0], k));
  return traj;
}

std::vector<InfoState> trajectory_info(const TemporalNetwork& net, const ControlEffect& eff,
                                       const InfoState& start, const ControlSchedule& u,
                                       std::size_t t0, std::size_t T) {
  check_schedule(u, t0, T, net.size());
  std::vector<InfoState> traj{start};
  traj.reserve(T - t0 + 1);
  for (std::size_t k = t0; k < T; ++k) traj.push_back(step_info(net, eff, traj.back(), u[k - t0], k));
  return traj;
}

std::vector<ProbState> linear_bound_trajectory(const TemporalNetwork& net, const ProbState& mu0,
                                               std::size_t T) {
  const std::size_t n = net.size();
  if (mu0.size() != n) throw ArgumentError("initial vector length differs from node count");
  std::vector<ProbState> out{mu0};
  for (std::size_t k = 0; k < T; ++k) {
    const Snapshot& snap = net.at(k);
    ProbState next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& l : snap.incoming(i)) next[i] += l.weight * out.back()[l.node];
    out.push_back(std::move(next));
  }
  return out;
}

ProbState linear_upper_bound(const TemporalNetwork& net, const ProbState& mu0, std::size_t K) {
  return linear_bound_trajectory(net, mu0, K).back();
}

}  // namespace sis::transnn
