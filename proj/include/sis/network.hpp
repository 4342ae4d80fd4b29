#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sis {

/// Directed transmission edge: `from` infects `to` with probability `weight`
/// per step. In adjacency terms this is entry (to, from).
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
};

/// One entry of a neighborhood list: the neighbor and the weight of the
/// connecting edge (w_ij for incoming lists, w_li for outgoing lists).
struct Link {
  std::size_t node = 0;
  double weight = 0.0;
};

/// Protection removes the fraction 1 - beta of a node's infection probability.
struct ControlEffect {
  double beta = 1.0;

  explicit ControlEffect(double retention = 1.0);
};

/// Contact graph and transmission probabilities at a single step. Every node
/// carries a self-loop (its persistence/recovery channel).
class Snapshot {
 public:
  Snapshot(std::size_t n, std::span<const Edge> edges, std::span<const double> self_loops);

  std::size_t size() const { return n_; }
  double weight(std::size_t i, std::size_t j) const { return weights_[i * n_ + j]; }
  bool has_edge(std::size_t i, std::size_t j) const { return adjacency_[i * n_ + j] != 0; }
  std::span<const Link> incoming(std::size_t i) const { return incoming_[i]; }
  std::span<const Link> outgoing(std::size_t i) const { return outgoing_[i]; }
  /// All edges other than self-loops, sorted by (to, from).
  std::vector<Edge> edges() const;
  std::vector<double> self_loops() const;
  std::size_t max_degree() const;

 private:
  std::size_t n_;
  std::vector<double> weights_;         // row-major, [i * n + j] = w_ij
  std::vector<std::uint8_t> adjacency_; // a_ij including the diagonal
  std::vector<std::vector<Link>> incoming_;
  std::vector<std::vector<Link>> outgoing_;
};

/// Time-varying directed contact network over steps 0 <= k < horizon.
/// Immutable after construction.
class TemporalNetwork {
 public:
  /// Same graph and weights at every step.
  static TemporalNetwork make_static(std::size_t n, std::size_t horizon, std::span<const Edge> edges,
                                     std::span<const double> self_loops);

  /// One (edges, self_loops) pair per step; edges_per_step.size() is the horizon.
  static TemporalNetwork make_time_varying(std::size_t n,
                                           const std::vector<std::vector<Edge>>& edges_per_step,
                                           const std::vector<std::vector<double>>& self_loops_per_step);

  std::size_t size() const { return n_; }
  std::size_t horizon() const { return horizon_; }
  bool is_static() const { return snapshots_.size() == 1; }

  /// Snapshot governing step k.
  const Snapshot& at(std::size_t k) const;

  /// w_ij^k; 0 for non-edges.
  double weight(std::size_t i, std::size_t j, std::size_t k) const;
  bool has_edge(std::size_t i, std::size_t j, std::size_t k) const;

  /// N_i^k: {j : (i,j) in E^k} plus i itself, ascending.
  std::vector<std::size_t> incoming_neighborhood(std::size_t i, std::size_t k) const;
  /// {l : (l,i) in E^k} plus i itself, ascending.
  std::vector<std::size_t> outgoing_neighborhood(std::size_t i, std::size_t k) const;

  /// m_ij^k(u_i) = u_i * w_ij^k * beta + (1 - u_i) * w_ij^k.
  double controlled_weight(const ControlEffect& effect, std::size_t i, std::size_t j, std::size_t k,
                           bool protect) const;

  /// Maximum in/out degree over all steps (self-loops excluded).
  std::size_t max_degree() const;

  /// A static network re-targeted to a different horizon.
  TemporalNetwork with_horizon(std::size_t horizon) const;

 private:
  TemporalNetwork(std::size_t n, std::size_t horizon, std::vector<Snapshot> snapshots);
  void check_node(std::size_t i) const;
  void check_step(std::size_t k) const;

  std::size_t n_;
  std::size_t horizon_;
  std::vector<Snapshot> snapshots_;
};

/// Receiver-side weight scaling; inline because it sits in every inner loop.
inline double controlled(double weight, double beta, bool protect) {
  return protect ? weight * beta : weight;
}

/// Relaxed form for u in [0, 1].
inline double controlled_relaxed(double weight, double beta, double u) {
  return u * weight * beta + (1.0 - u) * weight;
}

/// Parameters for Erdos-Renyi style random networks.
struct RandomNetworkSpec {
  std::size_t n = 5;
  std::size_t horizon = 10;
  double mean_degree = 2.0;  // expected in-degree, excluding the self-loop
  double weight_min = 0.0;
  double weight_max = 1.0;
  double self_loop_min = 0.0;
  double self_loop_max = 1.0;
  bool time_varying = false;
};

TemporalNetwork random_network(const RandomNetworkSpec& spec, std::mt19937_64& rng);

}  // namespace sis
