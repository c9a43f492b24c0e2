#include <doctest.h>

#include "support/oracles.hpp"

#include <qarrival/classical.hpp>
#include <qarrival/errors.hpp>
#include <qarrival/quantum.hpp>
#include <qarrival/wigner.hpp>

#include <cmath>
#include <numbers>

using namespace qarrival;

namespace {

// A phase point within about two standard deviations of the Wigner ridge.
PhasePoint near_ridge(const PacketParams& p, double t) {
  const double q = oracle::uniform(-2, 2) * p.sigma_p();
  const double centre = p.u * t + q * t / p.mass + 2 * p.C * q * p.sigma0 * p.sigma0 / p.hbar;
  return {centre + oracle::uniform(-2, 2) * p.sigma0, p.p_bar() + q};
}

} // namespace

TEST_CASE("closed form peak is 1/(pi hbar)") {
  for (double C : {0.0, 10.0}) {
    const auto p = oracle::fig1(1, C);
    for (double t : {0.0, 1e-5}) {
      CHECK(wigner::closed(p, p.u * t, p.p_bar(), t) ==
            doctest::Approx(1 / (std::numbers::pi * p.hbar)).epsilon(1e-14));
    }
  }
}

TEST_CASE("C = 0 Wigner function equals the classical density") {
  const auto p = oracle::fig1(1, 0);
  const double t = oracle::kFig1Time;
  for (int k = 0; k < 20; ++k) {
    const auto pt = near_ridge(p, t);
    CHECK(wigner::closed(p, pt.x, pt.p, t) ==
          doctest::Approx(classical::d_t(p, pt, t)).epsilon(1e-12));
  }
}

TEST_CASE("closed form against direct quadrature of the transform") {
  for (double C : {10.0, 0.0, -2.0}) {
    const auto p = oracle::fig1(1, C);
    for (double t : {0.0, oracle::kFig1Time}) {
      for (int k = 0; k < 10; ++k) {
        const auto pt = near_ridge(p, t);
        const auto q = wigner::quadrature_detail(p, pt.x, pt.p, t);
        const double c = wigner::closed(p, pt.x, pt.p, t);
        CHECK(std::abs(q.value - c) <= 1e-7 * std::abs(c));
        CHECK(q.imag_residue <= 1e-10 * std::abs(c));
      }
    }
  }
}

TEST_CASE("quadrature at the minimum-uncertainty peak") {
  const auto p = oracle::fig1(1, 0);
  CHECK(wigner::quadrature(p, 0, p.p_bar(), 0) ==
        doctest::Approx(1 / (std::numbers::pi * p.hbar)).epsilon(1e-7));
}

TEST_CASE("marginals reproduce rho and |phi0|^2") {
  const auto p = oracle::fig1(1, 10);
  for (double t : {0.0, oracle::kFig1Time}) {
    const auto grid = wigner::default_grid(p, t, 21, 21);
    const auto m = wigner::marginals(p, t, grid);
    for (std::size_t i = 0; i < m.x.size(); ++i) {
      const double ref = quantum::rho(p, m.x[i], t);
      CHECK(std::abs(m.x_profile[i] - ref) <= 1e-8 * quantum::rho(p, p.u * t, t));
    }
    for (std::size_t i = 0; i < m.p.size(); ++i) {
      const double ref = quantum::momentum_density(p, m.p[i]);
      CHECK(std::abs(m.p_profile[i] - ref) <= 1e-8 * quantum::momentum_density(p, p.p_bar()));
    }
    const auto mid = m.x.size() / 2;
    CHECK(m.x[mid] == doctest::Approx(p.u * t));
    CHECK(m.x_profile[mid] == doctest::Approx(quantum::rho(p, p.u * t, t)).epsilon(1e-8));
    const auto pmid = m.p.size() / 2;
    const double peak = std::sqrt(2 * p.sigma0 * p.sigma0 / (std::numbers::pi * p.hbar * p.hbar));
    CHECK(m.p_profile[pmid] == doctest::Approx(peak).epsilon(1e-8));
  }
}

TEST_CASE("marginal grid must reach eight standard deviations") {
  const auto p = oracle::fig1(1, 10);
  const auto narrow = wigner::default_grid(p, 0, 11, 11, 3.0);
  CHECK_THROWS_AS(wigner::marginals(p, 0, narrow), ValidationError);
}

TEST_CASE("Wigner function integrates to one") {
  const auto p = oracle::fig1(1, 10);
  quad::Options opt;
  opt.rel_tol = 1e-10;
  for (double t : {0.0, 1e-5, 1e-3}) {
    CHECK(std::abs(wigner::total_probability(p, t, opt) - 1) < 1e-7);
  }
}

TEST_CASE("Gaussian Wigner function is non-negative yet differs from D when C != 0") {
  const auto p = oracle::fig1(1, 10);
  const double t = 2e-6;
  double max_diff = 0;
  for (int k = 0; k < 50; ++k) {
    const auto pt = near_ridge(p, t);
    CHECK(wigner::closed(p, pt.x, pt.p, t) >= 0);
    max_diff = std::max(max_diff, std::abs(wigner::closed(p, pt.x, pt.p, t) -
                                           classical::d_t(p, pt, t)));
  }
  CHECK(max_diff > 1e-3 / p.hbar);
}
