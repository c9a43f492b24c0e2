#include <doctest.h>

#include "support/oracles.hpp"

#include <qarrival/classical.hpp>
#include <qarrival/errors.hpp>
#include <qarrival/quantum.hpp>

#include <cmath>
#include <numbers>

using namespace qarrival;

TEST_CASE("d0 peak values") {
  for (double C : {0.0, 10.0, -4.0}) {
    const auto p = oracle::fig1(1, C);
    const double peak = 1 / (std::numbers::pi * p.hbar * std::sqrt(1 + C * C));
    CHECK(classical::d0(p, {0, p.p_bar()}) == doctest::Approx(peak).epsilon(1e-14));
  }
}

TEST_CASE("d0 integrates to one") {
  const auto p = oracle::fig1(1, 10);
  CHECK(std::abs(oracle::phase_space_total(p, 0.0) - 1) < 1e-9);
}

TEST_CASE("d_t transports d0 along characteristics") {
  const auto p = oracle::fig1(20, 10);
  for (double x : {-1e-5, 0.0, 3e-5}) {
    for (double q : {-2.0, 0.0, 1.5}) {
      const PhasePoint pt{x, p.p_bar() + q * p.sigma_p()};
      CHECK(classical::d_t(p, pt, 0.0) == classical::d0(p, pt));
      const double t = 7e-6;
      CHECK(classical::d_t(p, {pt.p * t / p.mass, pt.p}, t) ==
            doctest::Approx(classical::d0(p, {0, pt.p})).epsilon(1e-12));
    }
  }
}

TEST_CASE("Liouville residual converges at second order") {
  const auto p = oracle::fig1(1, 10);
  for (int k = 0; k < 25; ++k) {
    const double t = oracle::uniform(0.2, 1.0) * oracle::kFig1Time;
    const double w = classical::width(p, t);
    const PhasePoint pt{p.u * t + oracle::uniform(-2, 2) * w,
                        p.p_bar() + oracle::uniform(-2, 2) * p.sigma_p()};
    const auto orders = oracle::measured_orders(
        [&](double s) { return oracle::liouville(p, pt, t, s * w / 1e4, s * t / 1e4); });
    CHECK(orders[0] >= 1.9);
    CHECK(orders[1] >= 1.9);
  }
}

TEST_CASE("rho at t = 0 and the width formula") {
  const auto p = oracle::fig1(1, 10);
  CHECK(classical::rho(p, 0, 0) ==
        doctest::Approx(1 / std::sqrt(2 * std::numbers::pi * 1e-10 * 101)).epsilon(1e-14));
  const double t = oracle::kFig1Time;
  const double a = p.hbar * t / (2 * p.mass * p.sigma0 * p.sigma0);
  CHECK(classical::width(p, t) ==
        doctest::Approx(p.sigma0 * std::sqrt(1 + 100 + a * a)).epsilon(1e-14));
}

TEST_CASE("rho and current agree with moments of d_t") {
  for (double m : {1.0, 100.0}) {
    const auto p = oracle::fig1(m, 10);
    const double t = oracle::kFig1Time;
    const double w = classical::width(p, t);
    for (int k = 0; k < 10; ++k) {
      const double x = p.u * t + oracle::uniform(-3, 3) * w;
      CHECK(oracle::rho_c_by_marginal(p, x, t) ==
            doctest::Approx(classical::rho(p, x, t)).epsilon(1e-8));
      CHECK(oracle::j_c_by_moment(p, x, t) ==
            doctest::Approx(classical::current(p, x, t)).epsilon(1e-8));
    }
  }
}

TEST_CASE("classical and quantum coincide for C = 0") {
  const auto p = oracle::fig2(5, 0);
  for (double t : {0.0, 1e-4, 1e-2}) {
    const double w = classical::width(p, t);
    for (int i = -5; i <= 5; ++i) {
      const double x = p.u * t + i * 0.7 * w;
      CHECK(classical::rho(p, x, t) == doctest::Approx(quantum::rho(p, x, t)).epsilon(1e-12));
      CHECK(classical::current(p, x, t) ==
            doctest::Approx(quantum::current(p, x, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("current at the centre is rho u, and the velocity is affine") {
  const auto p = oracle::fig1(1, 10);
  const double t = 3e-6;
  CHECK(classical::current(p, p.u * t, t) ==
        doctest::Approx(classical::rho(p, p.u * t, t) * p.u).epsilon(1e-14));
  CHECK(classical::mean_velocity(p, p.u * t, t) == doctest::Approx(p.u).epsilon(1e-15));
  CHECK(classical::mean_velocity(p, 4e-5, 0.0) == p.u);
  const double x0 = -1e-5, x1 = 2e-5, x2 = 6e-5;
  const double v0 = classical::mean_velocity(p, x0, t);
  const double v1 = classical::mean_velocity(p, x1, t);
  const double v2 = classical::mean_velocity(p, x2, t);
  CHECK(std::abs(v0 + (v2 - v0) / (x2 - x0) * (x1 - x0) - v1) < 1e-12 * std::abs(v1));
}

TEST_CASE("mean velocity refuses points where rho underflows") {
  const auto p = oracle::fig1(1, 0);
  CHECK_THROWS_AS(classical::mean_velocity(p, 1.0, 0.0), DomainError);
}

TEST_CASE("Fig. 1 parameters: density gap shrinks from 1 to 100 amu") {
  auto gap = [](double m) {
    const auto p = oracle::fig1(m, 10);
    const double t = oracle::kFig1Time;
    const double w = std::max(classical::width(p, t), spread(p, t).width);
    double sup = 0;
    for (int i = 0; i <= 200; ++i) {
      const double x = p.u * t + w * (-6.0 + 12.0 * i / 200);
      sup = std::max(sup, std::abs(quantum::rho(p, x, t) - classical::rho(p, x, t)));
    }
    return sup;
  };
  CHECK(gap(100) < gap(1));
}
