#pragma once

#include <qarrival/units.hpp>

namespace qarrival {

/// A point (x, p) of classical phase space; x in cm, p in g cm/s.
struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

namespace classical {

/// Initial phase-space density: product of the initial quantum position and
/// momentum densities, with no x-p correlation.
double d0(const PacketParams& params, PhasePoint pt);

/// Liouville-evolved density under H = p^2/2m: d0(x - p t/m, p).
double d_t(const PacketParams& params, PhasePoint pt, double t);

/// Standard deviation of the position marginal at time t.
double width(const PacketParams& params, double t);

double rho(const PacketParams& params, double x, double t);
double current(const PacketParams& params, double x, double t);

/// Conditional mean velocity current/rho, evaluated in closed (affine) form.
/// Throws DomainError where rho underflows to zero.
double mean_velocity(const PacketParams& params, double x, double t);

} // namespace classical
} // namespace qarrival
