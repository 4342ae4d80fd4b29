#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "sis/errors.hpp"
#include "sis/exact_markov.hpp"
#include "sis/transnn.hpp"

using namespace sis;
using namespace sis::transnn;

namespace {

const double inf = std::numeric_limits<double>::infinity();

TemporalNetwork pair_half() {
  std::vector<Edge> edges{{0, 1, 0.5}, {1, 0, 0.5}};
  return TemporalNetwork::make_static(2, 3, edges, std::vector<double>{0.5, 0.5});
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("TlogSigmoid examples") {
  for (double w : {0.0, 0.3, 1.0}) CHECK(tlogsigmoid(w, 0.0) == 0.0);
  CHECK(tlogsigmoid(1.0, 2.5) == 2.5);
  CHECK(std::abs(tlogsigmoid(0.5, inf) - std::log(2.0)) <= 1e-15);
  for (double x : {0.0, 1.0, inf}) CHECK(tlogsigmoid(0.0, x) == 0.0);
  CHECK(tlogsigmoid(1.0, inf) == inf);
}

TEST_CASE("TlogSigmoid rejects out-of-domain input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(tlogsigmoid(-0.1, 1.0), ArgumentError);
  CHECK_THROWS_AS(tlogsigmoid(1.1, 1.0), ArgumentError);
  CHECK_THROWS_AS(tlogsigmoid(0.5, -1.0), ArgumentError);
  CHECK_THROWS_AS(tlogsigmoid(nan, 1.0), ArgumentError);
  CHECK_THROWS_AS(tlogsigmoid(0.5, nan), ArgumentError);
}

TEST_CASE("TlogSigmoid stays accurate for tiny values") {
  // -log(1 - a) with a = w (1 - e^{-x}) ~ a for small a.
  const double w = 1e-3, x = 1e-9;
  const double a = w * -std::expm1(-x);
  CHECK(rel(tlogsigmoid(w, x), -std::log1p(-a)) <= 1e-14);
}

TEST_CASE("property: 0 <= Psi <= x and monotone in both arguments") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> W(0.0, 1.0), X(0.0, 8.0);
  const std::vector<double> grid_w{0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  const std::vector<double> grid_x{0.0, 0.01, 0.5, 1.0, 3.0, 10.0, inf};
  for (std::size_t a = 0; a < grid_w.size(); ++a)
    for (std::size_t b = 0; b < grid_x.size(); ++b) {
      const double v = tlogsigmoid(grid_w[a], grid_x[b]);
      CHECK(v >= 0.0);
      CHECK(v <= grid_x[b]);
      if (a + 1 < grid_w.size()) CHECK(v <= tlogsigmoid(grid_w[a + 1], grid_x[b]));
      if (b + 1 < grid_x.size()) CHECK(v <= tlogsigmoid(grid_w[a], grid_x[b + 1]));
    }
  for (int i = 0; i < 2000; ++i) {
    const double w = W(rng), x = X(rng), dw = 0.1 * W(rng), dx = X(rng);
    const double v = tlogsigmoid(w, x);
    CHECK(v >= 0.0);
    CHECK(v <= x + 1e-15);
    CHECK(v <= tlogsigmoid(std::min(1.0, w + dw), x));
    CHECK(v <= tlogsigmoid(w, x + dx));
  }
}

TEST_CASE("derivative in s: examples and finite differences") {
  for (double w : {0.0, 0.2, 0.7, 1.0}) CHECK(std::abs(dtlogsigmoid_ds(w, 0.0) - w) <= 1e-15);
  CHECK(dtlogsigmoid_ds(0.0, 2.0) == 0.0);
  CHECK(dtlogsigmoid_ds(0.4, inf) == 0.0);
  CHECK(dtlogsigmoid_ds(1.0, inf) == 0.0);
  CHECK(dtlogsigmoid_ds(1.0, 0.0) == 1.0);
  const double expect = 0.5 * std::exp(-1.0) / (0.5 + 0.5 * std::exp(-1.0));
  CHECK(std::abs(dtlogsigmoid_ds(0.5, 1.0) - 0.2689414) <= 1e-7);
  CHECK(rel(dtlogsigmoid_ds(0.5, 1.0), expect) <= 1e-14);
  const double h = 1e-6;
  for (double w : {0.05, 0.3, 0.5, 0.8, 0.99})
    for (double x : {0.01, 0.2, 1.0, 2.5, 6.0}) {
      const double fd = (tlogsigmoid(w, x + h) - tlogsigmoid(w, x - h)) / (2 * h);
      const double d = dtlogsigmoid_ds(w, x);
      CHECK(rel(d, fd) <= 1e-6);
      CHECK(d >= 0.0);
      CHECK(d <= w);
    }
}

TEST_CASE("derivative in w: finite differences and corners") {
  CHECK(dtlogsigmoid_dw(0.5, 0.0) == 0.0);
  CHECK(std::abs(dtlogsigmoid_dw(0.5, inf) - 2.0) <= 1e-15);
  CHECK(dtlogsigmoid_dw(1.0, inf) == inf);
  const double h = 1e-6;
  for (double w : {0.05, 0.3, 0.5, 0.8})
    for (double x : {0.01, 0.2, 1.0, 2.5, inf}) {
      const double fd = (tlogsigmoid(w + h, x) - tlogsigmoid(w - h, x)) / (2 * h);
      CHECK(rel(dtlogsigmoid_dw(w, x), fd) <= 1e-6);
    }
}

TEST_CASE("state transform round trips") {
  CHECK(to_info(0.0) == 0.0);
  CHECK(to_prob(0.0) == 0.0);
  CHECK(to_info(1.0) == inf);
  CHECK(to_prob(inf) == 1.0);
  CHECK(std::abs(to_info(0.5) - std::log(2.0)) <= 1e-15);
  CHECK(std::abs(to_prob(std::log(2.0)) - 0.5) <= 1e-15);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = U(rng);
    CHECK(std::abs(to_prob(to_info(p)) - p) <= 1e-12);
  }
  CHECK_THROWS_AS(to_info(1.5), ArgumentError);
  CHECK_THROWS_AS(to_prob(-1.0), ArgumentError);
}

TEST_CASE("step_prob examples") {
  auto net = pair_half();
  const ControlEffect eff(0.3);
  const auto p = step_prob(net, eff, {1.0, 0.0}, Action(2), 0);
  CHECK(std::abs(p[0] - 0.5) <= 1e-15);
  CHECK(std::abs(p[1] - 0.5) <= 1e-15);
  CHECK(step_prob(net, eff, {0.0, 0.0}, Action(2), 0) == ProbState{0.0, 0.0});
  std::vector<Edge> full{{0, 1, 1.0}, {1, 0, 1.0}, {2, 0, 1.0}};
  auto certain = TemporalNetwork::make_static(3, 1, full, std::vector<double>(3, 1.0));
  CHECK(step_prob(certain, eff, {1.0, 1.0, 1.0}, Action(3), 0) == ProbState{1.0, 1.0, 1.0});
}

TEST_CASE("step_prob with protection uses the controlled weights") {
  auto net = pair_half();
  const auto p = step_prob(net, ControlEffect(0.3), {1.0, 0.0}, Action::parse("10"), 0);
  CHECK(std::abs(p[0] - 0.15) <= 1e-15);
  CHECK(std::abs(p[1] - 0.5) <= 1e-15);
}

TEST_CASE("step_info examples") {
  auto net = pair_half();
  const ControlEffect eff(0.3);
  CHECK(step_info(net, eff, {0.0, 0.0}, Action(2), 0) == InfoState{0.0, 0.0});
  auto one = TemporalNetwork::make_static(1, 1, {}, std::vector<double>{0.5});
  CHECK(std::abs(step_info(one, eff, {inf}, Action(1), 0)[0] - std::log(2.0)) <= 1e-15);
}

TEST_CASE("property: conjugacy of the two step forms") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    auto net = oracle::random_net(n, 1, rng, 0.5);
    const ControlEffect eff(U(rng));
    ProbState p(n);
    Action u(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = trial % 3 == 0 ? static_cast<double>(coin(rng)) : U(rng);
      u.set(i, coin(rng));
    }
    const auto a = step_prob(net, eff, p, u, 0);
    const auto b = to_prob(step_info(net, eff, to_info(p), u, 0));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(a[i] - b[i]) <= 1e-12);
      if (a[i] == 0.0 || a[i] == 1.0) CHECK(a[i] == b[i]);
    }
  }
}

TEST_CASE("property: step_prob is monotone") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto net = oracle::random_net(n, 1, rng, 0.6);
    const ControlEffect eff(U(rng));
    ProbState lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = U(rng);
      hi[i] = lo[i] + (1.0 - lo[i]) * U(rng);
    }
    const Action u = Action::from_index(n, trial % (1u << n));
    const auto a = step_prob(net, eff, lo, u, 0), b = step_prob(net, eff, hi, u, 0);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] <= b[i]);
  }
}

TEST_CASE("trajectories") {
  auto one = TemporalNetwork::make_static(1, 6, {}, std::vector<double>{0.5});
  const ControlEffect eff(0.3);
  const auto p = trajectory_prob(one, eff, {1.0}, zero_schedule(1, 6), 0, 6);
  REQUIRE(p.size() == 7);
  for (std::size_t k = 0; k <= 6; ++k) CHECK(std::abs(p[k][0] - std::pow(0.5, k)) <= 1e-15);
  const auto z = trajectory_info(pair_half(), eff, {0.0, 0.0}, zero_schedule(2, 3), 0, 3);
  for (const auto& s : z) CHECK(s == InfoState{0.0, 0.0});
  const auto s = trajectory_info(pair_half(), eff, {inf, 0.0}, zero_schedule(2, 2), 1, 3);
  REQUIRE(s.size() == 3);
  for (std::size_t k = 1; k < s.size(); ++k)
    for (double v : s[k]) CHECK(std::isfinite(v));
  CHECK_THROWS_AS(trajectory_prob(one, eff, {1.0}, zero_schedule(1, 2), 0, 6), ArgumentError);
}

TEST_CASE("linear bound examples") {
  auto one = TemporalNetwork::make_static(1, 3, {}, std::vector<double>{0.5});
  CHECK(std::abs(linear_upper_bound(one, {1.0}, 2)[0] - 0.25) <= 1e-15);
  auto net = pair_half();
  const auto b = linear_upper_bound(net, {1.0, 1.0}, 1);
  CHECK(b == ProbState{1.0, 1.0});
  const auto p = step_prob(net, ControlEffect(0.3), {1.0, 1.0}, Action(2), 0);
  CHECK(std::abs(p[0] - 0.75) <= 1e-15);
  CHECK(std::abs(p[1] - 0.75) <= 1e-15);
  for (const auto& v : linear_bound_trajectory(net, {0.0, 0.0}, 3)) CHECK(v == ProbState{0.0, 0.0});
  std::vector<Edge> heavy{{0, 1, 0.9}, {1, 0, 0.9}};
  auto hot = TemporalNetwork::make_static(2, 3, heavy, std::vector<double>{0.9, 0.9});
  CHECK(linear_upper_bound(hot, {1.0, 1.0}, 3)[0] > 1.0);  // not clamped
}

TEST_CASE("property: exact <= TransNN <= linear bound, one-step equality (n <= 6)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 6, T = 6;
    auto net = oracle::random_net(n, T, rng, 0.5, trial % 2 == 1);
    const ControlEffect eff(0.3);
    const auto x0 = oracle::random_config(n, rng);
    std::vector<double> p0(n);
    for (std::size_t i = 0; i < n; ++i) p0[i] = x0[i];
    const auto exact = exact::marginal_trajectory(net, eff, exact::DistributionVector::point_mass(x0),
                                                  zero_schedule(n, T));
    const auto approx = trajectory_prob(net, eff, p0, zero_schedule(n, T), 0, T);
    const auto lin = linear_bound_trajectory(net, p0, T);
    for (std::size_t k = 0; k <= T; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(exact[k][i] <= approx[k][i] + 1e-12);
        CHECK(approx[k][i] <= lin[k][i] + 1e-12);
      }
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(exact[1][i] - approx[1][i]) <= 1e-12);
  }
}
