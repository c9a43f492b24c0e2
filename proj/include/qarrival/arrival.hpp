#pragma once

#include <qarrival/units.hpp>

#include <cstddef>
#include <functional>

namespace qarrival::arrival {

/// Current J(x, t) in 1/s; quantum::current and classical::current both fit.
using CurrentFn = std::function<double(double x, double t)>;

struct ArrivalResult {
  double tau_bar = 0.0;     ///< s
  double T_cutoff = 0.0;    ///< s
  double numerator = 0.0;   ///< int |J| t dt
  double denominator = 0.0; ///< int |J| dt
  double negative_flux_fraction = 0.0;
};

/// Upper time limit for the arrival integrals. ThreeSigma solves
/// T = (X + 3 sigma(T)) / u by fixed-point iteration from X/u, with sigma the
/// quantum packet width; FixedT returns the configured time.
/// Throws CutoffNonConvergence after max_cutoff_iters iterations.
double cutoff_time(const PacketParams& params, const DetectorConfig& det);

/// Mean arrival time at det.X from |J| on [0, T_cutoff], by adaptive quadrature.
/// Throws DenominatorVanishes or QuadratureFailure.
ArrivalResult mean_arrival_time(const CurrentFn& current, const PacketParams& params,
                                const DetectorConfig& det);

/// Same functional with composite Simpson on `panels` uniform panels.
ArrivalResult mean_arrival_time_fixed(const CurrentFn& current, const PacketParams& params,
                                      const DetectorConfig& det, std::size_t panels);

} // namespace qarrival::arrival
