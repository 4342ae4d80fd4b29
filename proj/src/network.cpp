#include "sis/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sis/errors.hpp"

namespace sis {

namespace {

void check_probability(double w, const char* what) {
  if (!(w >= 0.0 && w <= 1.0))
    throw ArgumentError(std::string(what) + " must lie in [0,1], got " + std::to_string(w));
}

}  // namespace

ControlEffect::ControlEffect(double retention) : beta(retention) {
  check_probability(beta, "beta");
}

Snapshot::Snapshot(std::size_t n, std::span<const Edge> edges, std::span<const double> self_loops)
    : n_(n), weights_(n * n, 0.0), adjacency_(n * n, 0), incoming_(n), outgoing_(n) {
  if (n == 0) throw ArgumentError("network needs at least one node");
  if (self_loops.size() != n)
    throw ArgumentError("expected " + std::to_string(n) + " self-loop weights, got " +
                        std::to_string(self_loops.size()));
  for (std::size_t i = 0; i < n; ++i) {
    check_probability(self_loops[i], "self-loop weight");
    weights_[i * n + i] = self_loops[i];
    adjacency_[i * n + i] = 1;
  }
  for (const auto& e : edges) {
    if (e.from >= n || e.to >= n)
      throw ArgumentError("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                          " references a node outside [0," + std::to_string(n) + ")");
    check_probability(e.weight, "edge weight");
    const std::size_t at = e.to * n + e.from;
    if (e.from == e.to) {
      if (e.weight != weights_[at])
        throw ArgumentError("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                            " conflicts with the self-loop weight");
      continue;
    }
    if (adjacency_[at]) throw ArgumentError("duplicate edge " + std::to_string(e.from) + "->" +
                                            std::to_string(e.to));
    weights_[at] = e.weight;
    adjacency_[at] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency_[i * n + j]) {
        incoming_[i].push_back({j, weights_[i * n + j]});
        outgoing_[j].push_back({i, weights_[i * n + j]});
      }
    }
  }
}

std::vector<Edge> Snapshot::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (const auto& l : incoming_[i])
      if (l.node != i) out.push_back({l.node, i, l.weight});
  return out;
}

std::vector<double> Snapshot::self_loops() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = weights_[i * n_ + i];
  return out;
}

std::size_t Snapshot::max_degree() const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < n_; ++i)
    d = std::max({d, incoming_[i].size() - 1, outgoing_[i].size() - 1});
  return d;
}

TemporalNetwork::TemporalNetwork(std::size_t n, std::size_t horizon, std::vector<Snapshot> snapshots)
    : n_(n), horizon_(horizon), snapshots_(std::move(snapshots)) {}

TemporalNetwork TemporalNetwork::make_static(std::size_t n, std::size_t horizon,
                                             std::span<const Edge> edges,
                                             std::span<const double> self_loops) {
  std::vector<Snapshot> snaps;
  snaps.emplace_back(n, edges, self_loops);
  return TemporalNetwork(n, horizon, std::move(snaps));
}

TemporalNetwork TemporalNetwork::make_time_varying(
    std::size_t n, const std::vector<std::vector<Edge>>& edges_per_step,
    const std::vector<std::vector<double>>& self_loops_per_step) {
  if (edges_per_step.empty()) throw ArgumentError("time-varying network needs at least one step");
  if (edges_per_step.size() != self_loops_per_step.size())
    throw ArgumentError("per-step edge lists (" + std::to_string(edges_per_step.size()) +
                        ") and self-loop lists (" + std::to_string(self_loops_per_step.size()) +
                        ") disagree on the horizon");
  std::vector<Snapshot> snaps;
  snaps.reserve(edges_per_step.size());
  for (std::size_t k = 0; k < edges_per_step.size(); ++k)
    snaps.emplace_back(n, edges_per_step[k], self_loops_per_step[k]);
  const std::size_t horizon = snaps.size();
  return TemporalNetwork(n, horizon, std::move(snaps));
}

const Snapshot& TemporalNetwork::at(std::size_t k) const {
  check_step(k);
  return snapshots_.size() == 1 ? snapshots_.front() : snapshots_[k];
}

void TemporalNetwork::check_node(std::size_t i) const {
  if (i >= n_)
    throw ArgumentError("node " + std::to_string(i) + " outside [0," + std::to_string(n_) + ")");
}

void TemporalNetwork::check_step(std::size_t k) const {
  if (k >= horizon_)
    throw ArgumentError("step " + std::to_string(k) + " outside [0," + std::to_string(horizon_) + ")");
}

double TemporalNetwork::weight(std::size_t i, std::size_t j, std::size_t k) const {
  check_node(i);
  check_node(j);
  return at(k).weight(i, j);
}

bool TemporalNetwork::has_edge(std::size_t i, std::size_t j, std::size_t k) const {
  check_node(i);
  check_node(j);
  return at(k).has_edge(i, j);
}

std::vector<std::size_t> TemporalNetwork::incoming_neighborhood(std::size_t i, std::size_t k) const {
  check_node(i);
  std::vector<std::size_t> out;
  for (const auto& l : at(k).incoming(i)) out.push_back(l.node);
  return out;
}

std::vector<std::size_t> TemporalNetwork::outgoing_neighborhood(std::size_t i, std::size_t k) const {
  check_node(i);
  std::vector<std::size_t> out;
  for (const auto& l : at(k).outgoing(i)) out.push_back(l.node);
  return out;
}

double TemporalNetwork::controlled_weight(const ControlEffect& effect, std::size_t i, std::size_t j,
                                          std::size_t k, bool protect) const {
  return controlled(weight(i, j, k), effect.beta, protect);
}

std::size_t TemporalNetwork::max_degree() const {
  std::size_t d = 0;
  for (const auto& s : snapshots_) d = std::max(d, s.max_degree());
  return d;
}

TemporalNetwork TemporalNetwork::with_horizon(std::size_t horizon) const {
  if (!is_static()) throw ArgumentError("only static networks can change horizon");
  return TemporalNetwork(n_, horizon, snapshots_);
}

TemporalNetwork random_network(const RandomNetworkSpec& spec, std::mt19937_64& rng) {
  if (spec.n == 0 || spec.horizon == 0) throw ArgumentError("random network needs n, T >= 1");
  const double p_edge =
      spec.n > 1 ? std::clamp(spec.mean_degree / static_cast<double>(spec.n - 1), 0.0, 1.0) : 0.0;
  std::uniform_real_distribution<double> weight(spec.weight_min, spec.weight_max);
  std::uniform_real_distribution<double> self(spec.self_loop_min, spec.self_loop_max);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto draw_step = [&](std::vector<Edge>& edges, std::vector<double>& loops) {
    loops.resize(spec.n);
    for (auto& w : loops) w = self(rng);
    for (std::size_t to = 0; to < spec.n; ++to)
      for (std::size_t from = 0; from < spec.n; ++from)
        if (from != to && coin(rng) < p_edge) edges.push_back({from, to, weight(rng)});
  };

  if (!spec.time_varying) {
    std::vector<Edge> edges;
    std::vector<double> loops;
    draw_step(edges, loops);
    return TemporalNetwork::make_static(spec.n, spec.horizon, edges, loops);
  }
  std::vector<std::vector<Edge>> edges(spec.horizon);
  std::vector<std::vector<double>> loops(spec.horizon);
  for (std::size_t k = 0; k < spec.horizon; ++k) draw_step(edges[k], loops[k]);
  return TemporalNetwork::make_time_varying(spec.n, edges, loops);
}

}  // namespace sis
