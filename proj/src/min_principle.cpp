#include "sis/min_principle.hpp"

#include <cmath>
#include <utility>

#include "sis/errors.hpp"

namespace sis::mp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::BoundaryOptimal: return "boundary-optimal";
    case Verdict::Interior: return "interior";
    case Verdict::Inconsistent: return "inconsistent";
  }
  return "?";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::FixedPoint: return "fixed-point";
    case Termination::TwoCycle: return "two-cycle";
    case Termination::IterationLimit: return "iteration-limit";
  }
  return "?";
}

std::size_t SolveReport::count(Verdict v) const {
  std::size_t c = 0;
  for (const auto& g : checks) c += g.verdict == v;
  return c;
}

double cost_j2(const std::vector<InfoState>& states, const ControlSchedule& u, double c) {
  if (states.size() != u.size() + 1) throw ArgumentError("cost needs one more state than actions");
  double j = 0.0;
  for (std::size_t h = 0; h < u.size(); ++h) {
    for (double s : states[h]) j += c * transnn::to_prob(s);
    j += static_cast<double>(u[h].count());
  }
  return j;
}

double hamiltonian(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s,
                   const AdjointState& lambda_next, std::span<const double> u, std::size_t k, double c) {
  const std::size_t n = net.size();
  if (s.size() != n || lambda_next.size() != n || u.size() != n)
    throw ArgumentError("hamiltonian inputs must have one entry per node");
  const Snapshot& snap = net.at(k);
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) h += c * transnn::to_prob(s[i]) + u[i];
  for (std::size_t i = 0; i < n; ++i) {
    if (lambda_next[i] == 0.0) continue;
    double row = 0.0;
    for (const auto& l : snap.incoming(i))
      row += transnn::tlogsigmoid(controlled_relaxed(l.weight, eff.beta, u[i]), s[l.node]);
    h += lambda_next[i] * row;
  }
  return h;
}

AdjointState adjoint_step(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s_k,
                          const AdjointState& lambda_next, const Action& u_k, std::size_t k, double c) {
  const std::size_t n = net.size();
  if (s_k.size() != n || lambda_next.size() != n || u_k.size() != n)
    throw ArgumentError("adjoint inputs must have one entry per node");
  const Snapshot& snap = net.at(k);
  AdjointState lambda(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = c * std::exp(-s_k[i]);
    for (const auto& l : snap.outgoing(i)) {
      if (lambda_next[l.node] == 0.0) continue;
      v += lambda_next[l.node] *
           transnn::dtlogsigmoid_ds(controlled(l.weight, eff.beta, u_k[l.node]), s_k[i]);
    }
    lambda[i] = v;
  }
  return lambda;
}

std::vector<AdjointState> adjoint_sweep(const TemporalNetwork& net, const ControlEffect& eff,
                                        const std::vector<InfoState>& states, const ControlSchedule& u,
                                        std::size_t t0, double c) {
  if (states.size() != u.size() + 1) throw ArgumentError("adjoint sweep needs one more state than actions");
  std::vector<AdjointState> lambda(states.size());
  lambda.back().assign(net.size(), 0.0);
  for (std::size_t h = u.size(); h-- > 0;)
    lambda[h] = adjoint_step(net, eff, states[h], lambda[h + 1], u[h], t0 + h, c);
  return lambda;
}

namespace {

// log[(1 - w b + w b e^{-s}) / (1 - w + w e^{-s})], >= 0 for b <= 1.
double protection_gain(double w, double beta, double s) {
  const double drop = w * (1.0 - beta) * -std::expm1(-s);  // numerator minus denominator
  if (drop == 0.0) return 0.0;
  const double den = (1.0 - w) + w * std::exp(-s);
  if (den == 0.0) return kInf;
  return std::log1p(drop / den);
}

}  // namespace

std::vector<double> delta_h(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s_k,
                            const AdjointState& lambda_next, std::size_t k) {
  const std::size_t n = net.size();
  if (s_k.size() != n || lambda_next.size() != n) throw ArgumentError("delta_h inputs must have one entry per node");
  const Snapshot& snap = net.at(k);
  std::vector<double> dh(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (lambda_next[i] == 0.0) continue;
    double gain = 0.0;
    for (const auto& l : snap.incoming(i)) gain += protection_gain(l.weight, eff.beta, s_k[l.node]);
    if (gain != 0.0) dh[i] = 1.0 - lambda_next[i] * gain;
  }
  return dh;
}

Action control_rule(std::span<const double> delta_h) {
  Action u(delta_h.size());
  for (std::size_t i = 0; i < delta_h.size(); ++i) u.set(i, delta_h[i] < 0.0);
  return u;
}

std::vector<GradientCheck> boundary_gradient_check(const TemporalNetwork& net, const ControlEffect& eff,
                                                   const std::vector<InfoState>& states,
                                                   const std::vector<AdjointState>& adjoint,
                                                   const ControlSchedule& u, std::size_t t0) {
  if (states.size() != u.size() + 1 || adjoint.size() != states.size())
    throw ArgumentError("gradient check needs matching state, adjoint and control sequences");
  const std::size_t n = net.size();
  std::vector<GradientCheck> out;
  out.reserve(u.size() * n);
  for (std::size_t h = 0; h < u.size(); ++h) {
    const std::size_t k = t0 + h;
    const Snapshot& snap = net.at(k);
    for (std::size_t i = 0; i < n; ++i) {
      const double lambda = adjoint[h + 1][i];
      auto gradient = [&](bool protect) {
        if (lambda == 0.0) return 1.0;
        double sum = 0.0;
        for (const auto& l : snap.incoming(i)) {
          const double slope = (eff.beta - 1.0) * l.weight;  // dm/du
          if (slope == 0.0) continue;
          sum += transnn::dtlogsigmoid_dw(controlled(l.weight, eff.beta, protect), states[h][l.node]) * slope;
        }
        return 1.0 + lambda * sum;
      };
      GradientCheck g{k, i, gradient(false), gradient(true), Verdict::BoundaryOptimal};
      const bool favors_zero = g.grad_at_0 >= 0.0 && g.grad_at_1 >= 0.0;
      const bool favors_one = g.grad_at_0 <= 0.0 && g.grad_at_1 <= 0.0;
      if (!favors_zero && !favors_one)
        g.verdict = Verdict::Interior;
      else if ((u[h][i] && !favors_one) || (!u[h][i] && !favors_zero))
        g.verdict = Verdict::Inconsistent;
      out.push_back(g);
    }
  }
  return out;
}

Solution fixed_point_solve(const TemporalNetwork& net, const ControlEffect& eff, const InfoState& s0,
                           std::size_t t0, std::size_t T, double c, const SolverOptions& opts,
                           const ControlSchedule* warm_start) {
  const std::size_t n = net.size();
  if (opts.max_iter < 1) throw ArgumentError("max_iter must be at least 1");
  if (T < t0 || T > net.horizon()) throw ArgumentError("solve horizon outside the network horizon");
  if (s0.size() != n) throw ArgumentError("initial state length differs from node count");
  const std::size_t steps = T - t0;

  ControlSchedule u = warm_start ? *warm_start : zero_schedule(n, steps);
  if (u.size() != steps) throw ArgumentError("warm start length differs from the solve horizon");
  ControlSchedule previous;

  Solution best;
  best.report.cost = kInf;
  SolveReport report;
  report.max_degree = net.max_degree();

  for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
    auto states = transnn::trajectory_info(net, eff, s0, u, t0, T);
    auto adjoint = adjoint_sweep(net, eff, states, u, t0, c);
    const double j = cost_j2(states, u, c);
    report.iterations = iter;
    report.cost_history.push_back(j);

    ControlSchedule next(steps);
    for (std::size_t h = 0; h < steps; ++h)
      next[h] = control_rule(delta_h(net, eff, states[h], adjoint[h + 1], t0 + h));

    if (j < best.report.cost) {
      best.schedule = u;
      best.states = std::move(states);
      best.adjoint = std::move(adjoint);
      best.report.cost = j;
    }
    if (next == u) {
      report.termination = Termination::FixedPoint;
      report.converged = true;
      break;
    }
    if (iter >= 2 && next == previous) {
      report.termination = Termination::TwoCycle;
      break;
    }
    previous = std::exchange(u, std::move(next));
  }

  report.cost = best.report.cost;
  report.checks = boundary_gradient_check(net, eff, best.states, best.adjoint, best.schedule, t0);
  best.report = std::move(report);
  return best;
}

}  // namespace sis::mp
