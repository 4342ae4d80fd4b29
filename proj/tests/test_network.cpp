#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "sis/errors.hpp"
#include "sis/network.hpp"

using namespace sis;

namespace {

TemporalNetwork star_into_zero() {
  std::vector<Edge> edges{{1, 0, 0.4}, {2, 0, 0.4}, {3, 0, 0.4}, {4, 0, 0.4}};
  return TemporalNetwork::make_static(5, 10, edges, std::vector<double>(5, 0.5));
}

}  // namespace

TEST_CASE("incoming neighborhood of an isolated node is the node itself") {
  auto net = TemporalNetwork::make_static(3, 2, {}, std::vector<double>{0.1, 0.2, 0.3});
  CHECK(net.incoming_neighborhood(1, 0) == std::vector<std::size_t>{1});
  CHECK(net.outgoing_neighborhood(2, 1) == std::vector<std::size_t>{2});
}

TEST_CASE("star into node 0") {
  auto net = star_into_zero();
  CHECK(net.incoming_neighborhood(0, 3) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(net.incoming_neighborhood(3, 3) == std::vector<std::size_t>{3});
  CHECK(net.outgoing_neighborhood(3, 0) == std::vector<std::size_t>{0, 3});
}

TEST_CASE("explicit self edge does not duplicate the node") {
  std::vector<Edge> edges{{0, 0, 0.5}, {1, 0, 0.2}};
  auto net = TemporalNetwork::make_static(2, 1, edges, std::vector<double>{0.5, 0.5});
  CHECK(net.incoming_neighborhood(0, 0) == std::vector<std::size_t>{0, 1});
  CHECK(net.weight(0, 0, 0) == 0.5);
}

TEST_CASE("explicit self edge that contradicts the self-loop is rejected") {
  std::vector<Edge> edges{{0, 0, 0.7}};
  CHECK_THROWS_AS(TemporalNetwork::make_static(1, 1, edges, std::vector<double>{0.5}), ArgumentError);
}

TEST_CASE("outgoing neighborhood for edge (2,1)") {
  // Edge (i, j) = (2, 1) means node 1 infects node 2.
  std::vector<Edge> edges{{1, 2, 0.3}};
  auto net = TemporalNetwork::make_static(3, 1, edges, std::vector<double>(3, 0.5));
  CHECK(net.outgoing_neighborhood(1, 0) == std::vector<std::size_t>{1, 2});
  CHECK(net.incoming_neighborhood(2, 0) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("out-of-range queries are argument errors") {
  auto net = star_into_zero();
  CHECK_THROWS_AS(net.incoming_neighborhood(5, 0), ArgumentError);
  CHECK_THROWS_AS(net.outgoing_neighborhood(0, 10), ArgumentError);
  CHECK_THROWS_AS(net.weight(0, 9, 0), ArgumentError);
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(TemporalNetwork::make_static(2, 1, {}, std::vector<double>{0.5}), ArgumentError);
  CHECK_THROWS_AS(TemporalNetwork::make_static(1, 1, {}, std::vector<double>{1.5}), ArgumentError);
  std::vector<Edge> bad{{0, 1, -0.1}};
  CHECK_THROWS_AS(TemporalNetwork::make_static(2, 1, bad, std::vector<double>{0.5, 0.5}), ArgumentError);
  std::vector<Edge> dup{{0, 1, 0.1}, {0, 1, 0.2}};
  CHECK_THROWS_AS(TemporalNetwork::make_static(2, 1, dup, std::vector<double>{0.5, 0.5}), ArgumentError);
  std::vector<Edge> out_of_range{{0, 3, 0.1}};
  CHECK_THROWS_AS(TemporalNetwork::make_static(2, 1, out_of_range, std::vector<double>{0.5, 0.5}),
                  ArgumentError);
  CHECK_THROWS_AS(ControlEffect(1.2), ArgumentError);
  CHECK_THROWS_AS(ControlEffect(-0.1), ArgumentError);
}

TEST_CASE("controlled weight") {
  std::vector<Edge> edges{{1, 0, 0.5}};
  auto net = TemporalNetwork::make_static(2, 1, edges, std::vector<double>{0.0, 0.5});
  const ControlEffect eff(0.3);
  CHECK(net.controlled_weight(eff, 0, 1, 0, true) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(net.controlled_weight(eff, 0, 1, 0, false) == 0.5);
  CHECK(net.controlled_weight(eff, 1, 0, 0, true) == 0.0);
  CHECK(net.controlled_weight(eff, 0, 0, 0, false) == 0.0);
  CHECK(net.weight(1, 0, 0) == 0.0);
}

TEST_CASE("property: 0 <= m <= w <= 1 and beta = 1 is neutral") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto net = oracle::random_net(n, 3, rng, 0.5, true);
    const ControlEffect eff(U(rng)), neutral(1.0);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (bool u : {false, true}) {
            const double w = net.weight(i, j, k);
            const double m = net.controlled_weight(eff, i, j, k, u);
            CHECK(0.0 <= m);
            CHECK(m <= w);
            CHECK(w <= 1.0);
            CHECK(net.controlled_weight(neutral, i, j, k, u) == w);
          }
  }
}

TEST_CASE("property: neighborhoods are sorted, unique, self-inclusive and dual") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 7;
    auto net = oracle::random_net(n, 2, rng, 0.4, true);
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const auto in = net.incoming_neighborhood(i, k);
        const auto out = net.outgoing_neighborhood(i, k);
        for (const auto& v : {in, out}) {
          CHECK(std::is_sorted(v.begin(), v.end()));
          CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());
          CHECK(std::binary_search(v.begin(), v.end(), i));
        }
        std::vector<std::size_t> dual;
        for (std::size_t l = 0; l < n; ++l) {
          const auto nl = net.incoming_neighborhood(l, k);
          if (std::binary_search(nl.begin(), nl.end(), i)) dual.push_back(l);
        }
        CHECK(out == dual);
      }
  }
}

TEST_CASE("time-varying network snapshots") {
  std::vector<std::vector<Edge>> edges{{{0, 1, 0.2}}, {}};
  std::vector<std::vector<double>> loops{{0.1, 0.2}, {0.3, 0.4}};
  auto net = TemporalNetwork::make_time_varying(2, edges, loops);
  CHECK(net.horizon() == 2);
  CHECK_FALSE(net.is_static());
  CHECK(net.has_edge(1, 0, 0));
  CHECK_FALSE(net.has_edge(1, 0, 1));
  CHECK(net.weight(1, 1, 1) == 0.4);
  CHECK(net.max_degree() == 1);
  CHECK_THROWS_AS(net.with_horizon(4), ArgumentError);
}

TEST_CASE("static network retargeted to a new horizon") {
  auto net = star_into_zero().with_horizon(3);
  CHECK(net.horizon() == 3);
  CHECK(net.weight(0, 2, 2) == 0.4);
  CHECK(net.max_degree() == 4);
}

TEST_CASE("random network respects its spec") {
  RandomNetworkSpec spec;
  spec.n = 8;
  spec.horizon = 4;
  spec.weight_min = 0.2;
  spec.weight_max = 0.6;
  spec.time_varying = true;
  std::mt19937_64 rng(3);
  auto net = random_network(spec, rng);
  CHECK(net.size() == 8);
  CHECK(net.horizon() == 4);
  for (std::size_t k = 0; k < 4; ++k)
    for (const auto& e : net.at(k).edges()) {
      CHECK(e.weight >= 0.2);
      CHECK(e.weight <= 0.6);
      CHECK(e.from != e.to);
    }
}
