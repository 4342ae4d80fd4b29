#pragma once

#include <cstddef>
#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "sis/bits.hpp"
#include "sis/network.hpp"
#include "sis/parallel.hpp"
#include "sis/rng.hpp"
#include "sis/transnn.hpp"

namespace sis::exact {

/// Largest n for which 2^n-state computations are attempted.
inline constexpr std::size_t kDefaultStateCap = 14;

/// Throws CapabilityError when 2^n enumeration exceeds `cap` nodes.
void check_state_cap(std::size_t n, std::size_t cap);

/// Probability law over the 2^n configurations, indexed by Configuration::index().
class DistributionVector {
 public:
  explicit DistributionVector(std::size_t n);

  static DistributionVector point_mass(const Configuration& x);
  /// Independent nodes with Pr(X_i = 1) = p_i.
  static DistributionVector product(std::span<const double> p);
  static DistributionVector uniform(std::size_t n);

  std::size_t nodes() const { return n_; }
  std::size_t states() const { return probs_.size(); }
  double operator[](std::uint64_t q) const { return probs_[q]; }
  double& operator[](std::uint64_t q) { return probs_[q]; }
  std::span<const double> probs() const { return probs_; }
  double total() const;

 private:
  std::size_t n_;
  std::vector<double> probs_;
};

/// rho_i = Pr(X_i(k+1) = 1 | X(k) = x, u(k) = u) = 1 - prod_j (1 - m_ij^k(u_i) x_j).
std::vector<double> infection_probabilities(const TemporalNetwork& net, const ControlEffect& eff,
                                            const Configuration& x, const Action& u, std::size_t k);

/// Draws X(k+1) given X(k) = x. One Bernoulli draw per (i, j) with x_j = 1,
/// consumed in ascending (i, j) order.
Configuration sample_step(const TemporalNetwork& net, const ControlEffect& eff, const Configuration& x,
                          const Action& u, std::size_t k, Substream& rng);

/// Pr(X(k+1) = q | X(k) = x, u) = prod_i [q_i rho_i + (1 - q_i)(1 - rho_i)].
double transition_probability(const TemporalNetwork& net, const ControlEffect& eff, const Configuration& x,
                              const Action& u, const Configuration& q, std::size_t k);

/// Push-forward of d through one step of the controlled kernel.
DistributionVector evolve_distribution(const TemporalNetwork& net, const ControlEffect& eff,
                                       const DistributionVector& d, const Action& u, std::size_t k,
                                       std::size_t state_cap = kDefaultStateCap);

/// Pr(X_i = 1) under d.
ProbState exact_marginals(const DistributionVector& d);

/// Marginals at k = 0, ..., T under an open-loop schedule (u.size() == T).
std::vector<ProbState> marginal_trajectory(const TemporalNetwork& net, const ControlEffect& eff,
                                           const DistributionVector& d0, const ControlSchedule& u,
                                           std::size_t state_cap = kDefaultStateCap);

/// One realized closed-loop path.
struct Trace {
  std::vector<Configuration> states;  // X(0), ..., X(T)
  std::vector<Action> actions;        // u(0), ..., u(T-1)
};

struct RolloutOptions {
  unsigned threads = 1;
  bool keep_traces = true;
};

struct RolloutResult {
  std::vector<double> costs;             // realized sum_t 1'(c X(t) + u(t)) per replication
  std::vector<std::size_t> protections;  // sum_t 1'u(t) per replication
  std::vector<Trace> traces;             // empty unless keep_traces
  /// [t * n + i]: number of replications with u_i(t) = 1.
  std::vector<std::size_t> action_counts;
};

/// Realized stage cost 1'(c x + u).
inline double stage_cost(const Configuration& x, const Action& u, double c) {
  return c * static_cast<double>(x.count()) + static_cast<double>(u.count());
}

/// Monte Carlo of the controlled chain over the network horizon.
/// make_controller(replication) returns a callable (t, x) -> Action used for
/// that replication only. Replication r draws step t from Substream(seed, r, t),
/// so competing controllers see common random numbers and the result does not
/// depend on the thread count.
template <class MakeController>
RolloutResult simulate_closed_loop(const TemporalNetwork& net, const ControlEffect& eff,
                                   const Configuration& x0, double c, std::uint64_t seed,
                                   std::size_t replications, const RolloutOptions& opts,
                                   MakeController&& make_controller) {
  const std::size_t T = net.horizon();
  const std::size_t n = net.size();
  std::vector<std::atomic<std::size_t>> counts(T * n);
  RolloutResult out;
  out.costs.resize(replications);
  out.protections.resize(replications);
  if (opts.keep_traces) out.traces.resize(replications);
  parallel_for(replications, opts.threads, [&](std::size_t r) {
    auto controller = make_controller(r);
    Configuration x = x0;
    double cost = 0.0;
    std::size_t protections = 0;
    Trace trace;
    if (opts.keep_traces) trace.states.push_back(x);
    for (std::size_t t = 0; t < T; ++t) {
      const Action u = controller(t, x);
      cost += stage_cost(x, u, c);
      protections += u.count();
      for (std::size_t i = 0; i < n; ++i)
        if (u[i]) counts[t * n + i].fetch_add(1, std::memory_order_relaxed);
      Substream rng(seed, r, t);
      x = sample_step(net, eff, x, u, t, rng);
      if (opts.keep_traces) {
        trace.actions.push_back(u);
        trace.states.push_back(x);
      }
    }
    out.costs[r] = cost;
    out.protections[r] = protections;
    if (opts.keep_traces) out.traces[r] = std::move(trace);
  });
  out.action_counts.reserve(counts.size());
  for (const auto& v : counts) out.action_counts.push_back(v.load());
  return out;
}

/// Open-loop schedule applied regardless of the realized state.
RolloutResult schedule_rollout(const TemporalNetwork& net, const ControlEffect& eff,
                               const ControlSchedule& u, const Configuration& x0, double c,
                               std::uint64_t seed, std::size_t replications,
                               const RolloutOptions& opts = {});

}  // namespace sis::exact
