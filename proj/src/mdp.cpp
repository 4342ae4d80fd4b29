#include "sis/mdp.hpp"

#include <bit>
#include <limits>
#include <string>

#include "sis/errors.hpp"

namespace sis::exact {

MdpPolicy mdp_solve(const TemporalNetwork& net, const ControlEffect& eff, double c, std::size_t T,
                    const MdpOptions& opts) {
  const std::size_t n = net.size();
  check_state_cap(n, opts.state_cap);
  if (!(c >= 0.0)) throw ArgumentError("cost weight c must be non-negative");
  if (T > net.horizon())
    throw ArgumentError("horizon " + std::to_string(T) + " exceeds the network horizon " +
                        std::to_string(net.horizon()));

  const std::uint64_t states = std::uint64_t{1} << n;
  MdpPolicy policy;
  policy.nodes = n;
  policy.horizon = T;
  policy.value.assign(T + 1, std::vector<double>(states, 0.0));
  policy.action.assign(T, std::vector<std::uint64_t>(states, 0));

  for (std::size_t k = T; k-- > 0;) {
    const Snapshot& snap = net.at(k);
    const std::vector<double>& next = policy.value[k + 1];
    std::vector<double>& value = policy.value[k];
    std::vector<std::uint64_t>& action = policy.action[k];

    parallel_for(states, opts.threads, [&](std::size_t x) {
      std::vector<double> rho(n);
      const double infected_cost = c * std::popcount(static_cast<std::uint64_t>(x));
      double best = std::numeric_limits<double>::infinity();
      std::uint64_t best_u = 0;
      for (std::uint64_t u = 0; u < states; ++u) {
        for (std::size_t i = 0; i < n; ++i) {
          const bool protect = (u >> i) & 1U;
          double stay = 1.0;
          for (const auto& l : snap.incoming(i))
            if ((x >> l.node) & 1U) stay *= 1.0 - controlled(l.weight, eff.beta, protect);
          rho[i] = 1.0 - stay;
        }
        // E[V_{k+1}(X')] with each kernel entry formed as a product of per-node factors.
        double expected = 0.0;
        for (std::uint64_t q = 0; q < states; ++q) {
          double pr = 1.0;
          for (std::size_t i = 0; i < n; ++i) pr *= ((q >> i) & 1U) ? rho[i] : 1.0 - rho[i];
          expected += pr * next[q];
        }
        const double total = infected_cost + std::popcount(u) + expected;
        if (total < best) {
          best = total;
          best_u = u;
        }
      }
      value[x] = best;
      action[x] = best_u;
    });
  }
  return policy;
}

RolloutResult policy_rollout(const TemporalNetwork& net, const ControlEffect& eff, const MdpPolicy& policy,
                             const Configuration& x0, double c, std::uint64_t seed, std::size_t replications,
                             const RolloutOptions& opts) {
  if (policy.horizon != net.horizon() || policy.nodes != net.size())
    throw ArgumentError("policy dimensions do not match the network");
  return simulate_closed_loop(net, eff, x0, c, seed, replications, opts, [&](std::size_t) {
    return [&](std::size_t t, const Configuration& x) { return policy.action_at(t, x); };
  });
}

}  // namespace sis::exact
