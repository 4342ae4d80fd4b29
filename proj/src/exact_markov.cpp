#include "sis/exact_markov.hpp"

#include <string>

#include "sis/errors.hpp"

namespace sis::exact {

void check_state_cap(std::size_t n, std::size_t cap) {
  if (n > cap || n > 30)
    throw CapabilityError("exact computation over 2^" + std::to_string(n) +
                          " configurations exceeds the cap of " + std::to_string(cap) +
                          " nodes (state space and per-step work grow as 2^n)");
}

DistributionVector::DistributionVector(std::size_t n) : n_(n), probs_(std::size_t{1} << n, 0.0) {}

DistributionVector DistributionVector::point_mass(const Configuration& x) {
  DistributionVector d(x.size());
  d.probs_[x.index()] = 1.0;
  return d;
}

DistributionVector DistributionVector::product(std::span<const double> p) {
  DistributionVector d(p.size());
  d.probs_[0] = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::size_t half = std::size_t{1} << i;
    for (std::size_t b = 0; b < half; ++b) {
      d.probs_[b | half] = d.probs_[b] * p[i];
      d.probs_[b] *= 1.0 - p[i];
    }
  }
  return d;
}

DistributionVector DistributionVector::uniform(std::size_t n) {
  DistributionVector d(n);
  for (auto& v : d.probs_) v = 1.0 / static_cast<double>(d.probs_.size());
  return d;
}

double DistributionVector::total() const {
  double s = 0.0;
  for (double v : probs_) s += v;
  return s;
}

namespace {

void check_lengths(const TemporalNetwork& net, const Configuration& x, const Action& u) {
  if (x.size() != net.size() || u.size() != net.size())
    throw ArgumentError("configuration/action length differs from node count");
}

// rho for a configuration given by index (n <= 63).
void rho_from_index(const Snapshot& snap, double beta, std::uint64_t x, std::uint64_t u, double* rho) {
  const std::size_t n = snap.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool protect = (u >> i) & 1U;
    double stay = 1.0;
    for (const auto& l : snap.incoming(i))
      if ((x >> l.node) & 1U) stay *= 1.0 - controlled(l.weight, beta, protect);
    rho[i] = 1.0 - stay;
  }
}

}  // namespace

std::vector<double> infection_probabilities(const TemporalNetwork& net, const ControlEffect& eff,
                                            const Configuration& x, const Action& u, std::size_t k) {
  check_lengths(net, x, u);
  const Snapshot& snap = net.at(k);
  std::vector<double> rho(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    double stay = 1.0;
    for (const auto& l : snap.incoming(i))
      if (x[l.node]) stay *= 1.0 - controlled(l.weight, eff.beta, u[i]);
    rho[i] = 1.0 - stay;
  }
  return rho;
}

Configuration sample_step(const TemporalNetwork& net, const ControlEffect& eff, const Configuration& x,
                          const Action& u, std::size_t k, Substream& rng) {
  check_lengths(net, x, u);
  const Snapshot& snap = net.at(k);
  Configuration next(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    bool infected = false;
    for (const auto& l : snap.incoming(i)) {
      if (!x[l.node]) continue;
      // Every (i, j) draw is consumed even after a success.
      if (rng.bernoulli(controlled(l.weight, eff.beta, u[i]))) infected = true;
    }
    next.set(i, infected);
  }
  return next;
}

double transition_probability(const TemporalNetwork& net, const ControlEffect& eff, const Configuration& x,
                              const Action& u, const Configuration& q, std::size_t k) {
  if (q.size() != net.size()) throw ArgumentError("target configuration length differs from node count");
  const auto rho = infection_probabilities(net, eff, x, u, k);
  double prob = 1.0;
  for (std::size_t i = 0; i < rho.size(); ++i) prob *= q[i] ? rho[i] : 1.0 - rho[i];
  return prob;
}

DistributionVector evolve_distribution(const TemporalNetwork& net, const ControlEffect& eff,
                                       const DistributionVector& d, const Action& u, std::size_t k,
                                       std::size_t state_cap) {
  const std::size_t n = net.size();
  check_state_cap(n, state_cap);
  if (d.nodes() != n || u.size() != n) throw ArgumentError("distribution/action size differs from node count");
  const Snapshot& snap = net.at(k);
  const std::uint64_t uidx = u.index();
  const std::size_t states = d.states();

  DistributionVector out(n);
  std::vector<double> rho(n), row(states);
  for (std::uint64_t x = 0; x < states; ++x) {
    const double mass = d[x];
    if (mass == 0.0) continue;
    rho_from_index(snap, eff.beta, x, uidx, rho.data());
    // Expand the product-form row one node at a time.
    row[0] = mass;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t half = std::size_t{1} << i;
      for (std::size_t b = 0; b < half; ++b) {
        row[b | half] = row[b] * rho[i];
        row[b] *= 1.0 - rho[i];
      }
    }
    for (std::uint64_t q = 0; q < states; ++q) out[q] += row[q];
  }
  return out;
}

ProbState exact_marginals(const DistributionVector& d) {
  ProbState p(d.nodes(), 0.0);
  for (std::uint64_t q = 0; q < d.states(); ++q) {
    const double mass = d[q];
    if (mass == 0.0) continue;
    for (std::size_t i = 0; i < d.nodes(); ++i)
      if ((q >> i) & 1U) p[i] += mass;
  }
  return p;
}

std::vector<ProbState> marginal_trajectory(const TemporalNetwork& net, const ControlEffect& eff,
                                           const DistributionVector& d0, const ControlSchedule& u,
                                           std::size_t state_cap) {
  check_state_cap(net.size(), state_cap);
  std::vector<ProbState> out{exact_marginals(d0)};
  DistributionVector d = d0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    d = evolve_distribution(net, eff, d, u[k], k, state_cap);
    out.push_back(exact_marginals(d));
  }
  return out;
}

RolloutResult schedule_rollout(const TemporalNetwork& net, const ControlEffect& eff,
                               const ControlSchedule& u, const Configuration& x0, double c,
                               std::uint64_t seed, std::size_t replications, const RolloutOptions& opts) {
  if (u.size() != net.horizon()) throw ArgumentError("schedule length differs from the network horizon");
  return simulate_closed_loop(net, eff, x0, c, seed, replications, opts, [&](std::size_t) {
    return [&](std::size_t t, const Configuration&) { return u[t]; };
  });
}

}  // namespace sis::exact
