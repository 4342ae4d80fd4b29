#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sis/exact_markov.hpp"

namespace sis::exact {

/// Finite-horizon optimal feedback law for the controlled chain with stage
/// cost 1'(c x + u). Tables are indexed by Configuration::index().
struct MdpPolicy {
  std::size_t nodes = 0;
  std::size_t horizon = 0;
  std::vector<std::vector<double>> value;          // V_0 .. V_T, V_T == 0
  std::vector<std::vector<std::uint64_t>> action;  // argmin action index at k = 0 .. T-1

  double value_at(std::size_t k, const Configuration& x) const { return value.at(k).at(x.index()); }
  Action action_at(std::size_t k, const Configuration& x) const {
    return Action::from_index(nodes, action.at(k).at(x.index()));
  }
};

struct MdpOptions {
  std::size_t state_cap = kDefaultStateCap;
  unsigned threads = 1;
};

/// Backward Bellman recursion over all 2^n configurations and all 2^n
/// actions. Ties go to the smallest action index.
MdpPolicy mdp_solve(const TemporalNetwork& net, const ControlEffect& eff, double c, std::size_t T,
                    const MdpOptions& opts = {});

/// Closed-loop Monte Carlo under the tabulated policy.
RolloutResult policy_rollout(const TemporalNetwork& net, const ControlEffect& eff, const MdpPolicy& policy,
                             const Configuration& x0, double c, std::uint64_t seed, std::size_t replications,
                             const RolloutOptions& opts = {});

}  // namespace sis::exact
