#include <qarrival/classical.hpp>
#include <qarrival/errors.hpp>
#include <qarrival/quantum.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace qarrival::classical {
namespace {

double affine_velocity(const PacketParams& params, double x, double t) {
  const double hb = params.hbar;
  const double m2s4 = params.mass * params.mass * std::pow(params.sigma0, 4);
  return params.u +
         (x - params.u * t) * hb * hb * t / (hb * hb * t * t + 4.0 * m2s4 * (1.0 + params.C * params.C));
}

} // namespace

double d0(const PacketParams& params, PhasePoint pt) {
  const double c2 = 1.0 + params.C * params.C;
  const double sig2 = params.sigma0 * params.sigma0;
  const double q = pt.p - params.p_bar();
  const double exponent =
      -pt.x * pt.x / (2.0 * sig2 * c2) - 2.0 * sig2 * q * q / (params.hbar * params.hbar);
  return tail_exp(exponent) / (std::numbers::pi * params.hbar * std::sqrt(c2));
}

double d_t(const PacketParams& params, PhasePoint pt, double t) {
  return d0(params, {pt.x - pt.p * t / params.mass, pt.p});
}

double width(const PacketParams& params, double t) {
  const double spread_term = params.hbar * t / (2.0 * params.mass * params.sigma0 * params.sigma0);
  return params.sigma0 * std::sqrt(1.0 + params.C * params.C + spread_term * spread_term);
}

double rho(const PacketParams& params, double x, double t) {
  const double w = width(params, t);
  const double d = x - params.u * t;
  return tail_exp(-d * d / (2.0 * w * w)) / (std::sqrt(2.0 * std::numbers::pi) * w);
}

double current(const PacketParams& params, double x, double t) {
  const double r = rho(params, x, t);
  return r == 0.0 ? 0.0 : r * affine_velocity(params, x, t);
}

double mean_velocity(const PacketParams& params, double x, double t) {
  if (rho(params, x, t) == 0.0) {
    std::ostringstream msg;
    msg << "mean velocity undefined at (x = " << x << " cm, t = " << t
        << " s): classical density underflows to 0";
    throw DomainError(msg.str());
  }
  return affine_velocity(params, x, t);
}

} // namespace qarrival::classical
