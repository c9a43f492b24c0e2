#include <qarrival/quantum.hpp>

#include <cmath>
#include <numbers>

namespace qarrival {

// Below this, exp() lands in the subnormal range.
static constexpr double kMinNormalExponent = -708.0;

double tail_exp(double exponent) {
  return exponent < kMinNormalExponent ? 0.0 : std::exp(exponent);
}

SpreadState spread(const PacketParams& params, double t) {
  const double s = params.C + params.hbar * t / (2.0 * params.mass * params.sigma0 * params.sigma0);
  return {s, params.sigma0 * std::sqrt(1.0 + s * s)};
}

namespace quantum {

std::complex<double> psi(const PacketParams& params, double x, double t) {
  const auto [s, width] = spread(params, t);
  const double sig2 = params.sigma0 * params.sigma0;
  const double one_s2 = 1.0 + s * s;
  const double d = x - params.u * t;

  // -(d^2) / (4 sig2 (1 + i s)) split into real and imaginary parts.
  const double envelope_re = -d * d / (4.0 * sig2 * one_s2);
  const double envelope_im = d * d * s / (4.0 * sig2 * one_s2);

  const double amplitude = tail_exp(envelope_re) /
                           (std::pow(2.0 * std::numbers::pi * sig2, 0.25) * std::pow(one_s2, 0.25));
  if (amplitude == 0.0) {
    return {0.0, 0.0};
  }
  const double phase = params.wave_number() * (x - 0.5 * params.u * t) + envelope_im -
                       0.5 * std::atan(s);
  return std::polar(amplitude, phase);
}

std::complex<double> phi0(const PacketParams& params, double p) {
  const double q = p - params.p_bar();
  const double a = params.sigma0 * params.sigma0 * q * q / (params.hbar * params.hbar);
  const double norm = std::pow(2.0 * params.sigma0 * params.sigma0 /
                                   (std::numbers::pi * params.hbar * params.hbar),
                               0.25);
  const double amplitude = norm * tail_exp(-a);
  return amplitude == 0.0 ? std::complex<double>{} : std::polar(amplitude, -a * params.C);
}

double momentum_density(const PacketParams& params, double p) {
  const double q = p - params.p_bar();
  const double sig2 = params.sigma0 * params.sigma0;
  const double hb2 = params.hbar * params.hbar;
  return std::sqrt(2.0 * sig2 / (std::numbers::pi * hb2)) * tail_exp(-2.0 * sig2 * q * q / hb2);
}

double rho(const PacketParams& params, double x, double t) {
  const double width = spread(params, t).width;
  const double d = x - params.u * t;
  return tail_exp(-d * d / (2.0 * width * width)) / (std::sqrt(2.0 * std::numbers::pi) * width);
}

double velocity(const PacketParams& params, double x, double t) {
  const double s = spread(params, t).s;
  return params.u + params.hbar * s * (x - params.u * t) /
                        (2.0 * params.mass * params.sigma0 * params.sigma0 * (1.0 + s * s));
}

double current(const PacketParams& params, double x, double t) {
  const double r = rho(params, x, t);
  return r == 0.0 ? 0.0 : r * velocity(params, x, t);
}

} // namespace quantum
} // namespace qarrival
