#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/properties.hpp"
#include "fairq/theory.hpp"

using namespace fairq;
using namespace fairq::testing;

TEST_CASE("fixed points at gamma 0.9, l 0.3 against the iteration oracle") {
  const GameParams g{0.3, 0.5, 0.8};
  const auto fp = theory::fixed_points(g, 0.9);
  CHECK(fp.s5_mid == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(fp.s1_low == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(std::abs(fp.s5_mid - iterate_self_loop(0.5, 0.9, 0.5)) < 1e-9);
  CHECK(std::abs(fp.s1_low - iterate_self_loop(0.7, 0.9, 0.5)) < 1e-9);
  CHECK(std::abs(fp.s1_mid - iterate_feed_forward(0.5, 0.9, 0.5, 0.5)) < 1e-9);
}

TEST_CASE("myopic limit") {
  const auto fp = theory::fixed_points(GameParams{}, 0.0);
  CHECK(fp.s5_mid == 0.5);
  CHECK(fp.s1_low == doctest::Approx(0.7));
}

TEST_CASE("feed-forward value at gamma 0.5") {
  const auto fp = theory::fixed_points(GameParams{}, 0.5);
  CHECK(fp.s1_mid == doctest::Approx(0.5 * 0.5 / 0.5 + 0.5).epsilon(1e-15));
  CHECK(fp.s1_mid == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(fp.s1_mid - iterate_feed_forward(0.5, 0.5, 1.0, 0.5)) < 1e-9);
  CHECK(fp.s2_mid == fp.s1_mid);
}

TEST_CASE("fixed points match iteration for random parameters") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ul(0.01, 0.49), ug(0.0, 0.95), ua(0.2, 1.0);
  for (int k = 0; k < 20; ++k) {
    const GameParams g{ul(gen), 0.5, 0.8};
    const double gamma = ug(gen);
    const double alpha = ua(gen);
    const auto fp = theory::fixed_points(g, gamma);
    CHECK(std::abs(fp.s5_mid - iterate_self_loop(0.5, gamma, alpha)) < 1e-9);
    CHECK(std::abs(fp.s1_low - iterate_self_loop(1.0 - g.l, gamma, alpha)) < 1e-9);
    CHECK(std::abs(fp.s1_mid - iterate_feed_forward(0.5, gamma, alpha, 0.5)) < 1e-9);
    CHECK(std::abs(fp.s2_mid - iterate_feed_forward(0.5, gamma, alpha, 0.5)) < 1e-9);
  }
}

TEST_CASE("boundary alpha") {
  CHECK(*theory::boundary_alpha({0.3, 0.5, 0.8}, 0.9) == doctest::Approx(0.2 / (0.7 - 0.45)).epsilon(1e-15));
  CHECK(*theory::boundary_alpha({0.3, 0.5, 0.8}, 0.9) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(*theory::boundary_alpha({0.3, 0.5, 0.8}, 0.0) == doctest::Approx(0.2 / 0.7).epsilon(1e-15));
  const double near = *theory::boundary_alpha({0.5 - 1e-9, 0.5, 0.8}, 0.5);
  CHECK(near < 1e-8);
  CHECK(near > 0.0);
  CHECK_THROWS_AS(theory::boundary_alpha({0.5, 0.5, 0.8}, 0.5), InvalidParameter);
  CHECK_THROWS_AS(theory::boundary_alpha({0.3, 0.5, 0.8}, 1.0), InvalidParameter);
  CHECK_THROWS_AS(theory::fixed_points({0.3, 0.5, 0.8}, -0.1), InvalidParameter);
}

TEST_CASE("balance identity vanishes at the boundary") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> ul(0.01, 0.49), ug(0.0, 0.99);
  for (int k = 0; k < 100; ++k) {
    const GameParams g{ul(gen), 0.5, 0.8};
    const double gamma = ug(gen);
    const double alpha = *theory::boundary_alpha(g, gamma);
    CHECK(std::abs(theory::balance_residual(g, gamma, alpha)) < 1e-12);
    // Independent evaluation from the geometric sums.
    const double q1l = (1.0 - g.l) / (1.0 - gamma);
    const double q1m = 0.5 + gamma * 0.5 / (1.0 - gamma);
    const double own = (1.0 - alpha) * q1l + alpha * (gamma * q1m + 0.0) - q1m;
    CHECK(std::abs(own) < 1e-12);
  }
}

TEST_CASE("boundary curve") {
  const std::vector<double> grid{0.0, 0.5, 0.9};
  const auto curve = theory::boundary_curve({0.3, 0.5, 0.8}, grid);
  REQUIRE(curve.size() == 3);
  CHECK(*curve[0].alpha == doctest::Approx(0.2857142857142857).epsilon(1e-12));
  CHECK(*curve[1].alpha == doctest::Approx(0.4444444444444444).epsilon(1e-12));
  CHECK(*curve[2].alpha == doctest::Approx(0.8).epsilon(1e-12));

  const std::vector<double> one{0.3};
  CHECK(theory::boundary_curve({0.3, 0.5, 0.8}, one).size() == 1);

  std::vector<double> sorted;
  for (int i = 0; i < 99; ++i) sorted.push_back(i / 100.0);
  const auto c = theory::boundary_curve({0.2, 0.5, 0.8}, sorted);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(*c[i].alpha > *c[i - 1].alpha);
}

TEST_CASE("update properties") {
  for (auto check : {payoff_conservation, q_update_convexity, fixed_point_convergence}) {
    const CheckResult r = check();
    INFO(r.detail);
    CHECK(r.ok);
  }
}
