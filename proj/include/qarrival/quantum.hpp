#pragma once

#include <qarrival/units.hpp>

#include <complex>

namespace qarrival {

/// Spreading state of the evolved packet at time t.
struct SpreadState {
  double s = 0.0;     ///< C + hbar t / (2 m sigma0^2)
  double width = 0.0; ///< sigma0 sqrt(1 + s^2), cm
};

SpreadState spread(const PacketParams& params, double t);

/// exp(e), flushed to exactly 0 once the result would be subnormal.
double tail_exp(double exponent);

namespace quantum {

/// Time-evolved wave function (cm^-1/2).
std::complex<double> psi(const PacketParams& params, double x, double t);

/// Initial momentum-space amplitude (g cm/s)^-1/2.
std::complex<double> phi0(const PacketParams& params, double p);

/// |phi0(p)|^2; time independent for free motion.
double momentum_density(const PacketParams& params, double p);

/// Position probability density |psi|^2 (1/cm).
double rho(const PacketParams& params, double x, double t);

/// Schroedinger probability current (1/s). Can be negative.
double current(const PacketParams& params, double x, double t);

/// current / rho, the Bohmian velocity field; affine in x.
double velocity(const PacketParams& params, double x, double t);

} // namespace quantum
} // namespace qarrival
