#include <qarrival/errors.hpp>
#include <qarrival/quantum.hpp>
#include <qarrival/wigner.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace qarrival::wigner {
namespace {

constexpr double kCoverSigmas = 8.0;

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

// Centre of the x-Gaussian of D_W at fixed p.
double x_center(const PacketParams& params, double p, double t) {
  const double q = p - params.p_bar();
  return p * t / params.mass + 2.0 * params.C * q * params.sigma0 * params.sigma0 / params.hbar;
}

} // namespace

double closed(const PacketParams& params, double x, double p, double t) {
  const double q = p - params.p_bar();
  const double sig2 = params.sigma0 * params.sigma0;
  const double shifted = x - x_center(params, p, t);
  const double exponent =
      -2.0 * q * q * sig2 / (params.hbar * params.hbar) - shifted * shifted / (2.0 * sig2);
  return tail_exp(exponent) / (std::numbers::pi * params.hbar);
}

QuadValue quadrature_detail(const PacketParams& params, double x, double p, double t,
                            double rel_tol, int max_depth) {
  const double half = kCoverSigmas * spread(params, t).width;
  const double two_p_over_hbar = 2.0 * p / params.hbar;
  auto integrand = [&](double y) {
    return std::conj(quantum::psi(params, x + y, t)) * quantum::psi(params, x - y, t) *
           std::polar(1.0, two_p_over_hbar * y);
  };
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-13;
  opt.max_depth = max_depth;
  opt.initial_panels = 64;
  const auto r = quad::integrate(integrand, -half, half, opt);
  const double norm = 1.0 / (std::numbers::pi * params.hbar);
  return {norm * r.value.real(), norm * std::abs(r.value.imag()), r.evaluations};
}

double quadrature(const PacketParams& params, double x, double p, double t) {
  return quadrature_detail(params, x, p, t).value;
}

MarginalGrid default_grid(const PacketParams& params, double t, std::size_t nx, std::size_t np,
                          double n_sigma) {
  const double xc = params.u * t;
  const double wx = n_sigma * spread(params, t).width;
  const double wp = n_sigma * params.sigma_p();
  return {xc - wx, xc + wx, nx, params.p_bar() - wp, params.p_bar() + wp, np};
}

Marginals marginals(const PacketParams& params, double t, const MarginalGrid& grid,
                    const quad::Options& opt) {
  const double xc = params.u * t;
  const double wx = kCoverSigmas * spread(params, t).width;
  const double pc = params.p_bar();
  const double wp = kCoverSigmas * params.sigma_p();
  // Small slack so a grid built from the same formula is accepted.
  const double slack = 1e-12;
  if (grid.nx < 2 || grid.np < 2) {
    throw ValidationError("marginal grid needs at least 2 points per axis");
  }
  if (grid.x_min > xc - wx * (1 - slack) || grid.x_max < xc + wx * (1 - slack)) {
    std::ostringstream msg;
    msg << "x grid [" << grid.x_min << ", " << grid.x_max << "] does not cover u t +- 8 widths ["
        << xc - wx << ", " << xc + wx << "]";
    throw ValidationError(msg.str());
  }
  if (grid.p_min > pc - wp * (1 - slack) || grid.p_max < pc + wp * (1 - slack)) {
    std::ostringstream msg;
    msg << "p grid [" << grid.p_min << ", " << grid.p_max << "] does not cover p_bar +- 8 sigma_p ["
        << pc - wp << ", " << pc + wp << "]";
    throw ValidationError(msg.str());
  }

  Marginals out;
  out.x = linspace(grid.x_min, grid.x_max, grid.nx);
  out.p = linspace(grid.p_min, grid.p_max, grid.np);

  // At fixed x the p-profile is a product of the momentum Gaussian and a second
  // Gaussian of width sigma0 / |t/m + 2 C sigma0^2 / hbar| in q, which can be
  // much narrower; pin its centre with breakpoints.
  const double sig2 = params.sigma0 * params.sigma0;
  const double slope = t / params.mass + 2.0 * params.C * sig2 / params.hbar;
  const double p_half = 10.0 * params.sigma_p();
  for (double x : out.x) {
    std::vector<double> breaks;
    if (slope != 0.0) {
      const double q_star = (x - xc) / slope;
      const double narrow = params.sigma0 / std::abs(slope);
      for (double k : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0}) {
        breaks.push_back(pc + q_star + k * narrow);
      }
    }
    const auto r = quad::integrate([&](double p) { return closed(params, x, p, t); }, pc - p_half,
                                   pc + p_half, opt, breaks);
    out.x_profile.push_back(r.value);
  }
  for (double p : out.p) {
    const double c = x_center(params, p, t);
    const double half = 10.0 * params.sigma0;
    const auto r = quad::integrate([&](double x) { return closed(params, x, p, t); }, c - half,
                                   c + half, opt, std::array{c});
    out.p_profile.push_back(r.value);
  }
  return out;
}

double total_probability(const PacketParams& params, double t, const quad::Options& opt) {
  const double pc = params.p_bar();
  const double wp = kCoverSigmas * params.sigma_p();
  const double wx = kCoverSigmas * params.sigma0;
  return quad::integrate_nested([&](double p, double x) { return closed(params, x, p, t); },
                                pc - wp, pc + wp,
                                [&](double p) {
                                  const double c = x_center(params, p, t);
                                  return std::pair{c - wx, c + wx};
                                },
                                opt, std::array{pc});
}

} // namespace qarrival::wigner
