#pragma once

#include <qarrival/quadrature.hpp>
#include <qarrival/units.hpp>

#include <cstddef>
#include <vector>

namespace qarrival::wigner {

/// Closed-form Wigner function of the evolved packet, 1/(cm g cm/s).
double closed(const PacketParams& params, double x, double p, double t);

struct QuadValue {
  double value = 0.0;        ///< real part, the Wigner value
  double imag_residue = 0.0; ///< |imaginary part|; zero for an exact transform
  std::size_t evaluations = 0;
};

/// Direct quadrature of the Wigner transform of quantum::psi over
/// y in +-8 widths, with bisection capped at `max_depth` levels.
/// Throws QuadratureFailure on non-convergence.
QuadValue quadrature_detail(const PacketParams& params, double x, double p, double t,
                            double rel_tol = 1e-10, int max_depth = 20);

double quadrature(const PacketParams& params, double x, double p, double t);

struct MarginalGrid {
  double x_min = 0.0, x_max = 0.0;
  std::size_t nx = 0;
  double p_min = 0.0, p_max = 0.0;
  std::size_t np = 0;
};

/// Grid spanning +-n standard deviations of the position and momentum marginals.
MarginalGrid default_grid(const PacketParams& params, double t, std::size_t nx, std::size_t np,
                          double n_sigma = 8.0);

struct Marginals {
  std::vector<double> x, x_profile; ///< int D_W dp, compare with quantum::rho
  std::vector<double> p, p_profile; ///< int D_W dx, compare with quantum::momentum_density
};

/// Throws ValidationError if the grid does not reach +-8 standard deviations,
/// QuadratureFailure if an integral fails.
Marginals marginals(const PacketParams& params, double t, const MarginalGrid& grid,
                    const quad::Options& opt = {});

/// int int D_W dx dp over +-8 standard deviations.
double total_probability(const PacketParams& params, double t, const quad::Options& opt = {});

} // namespace qarrival::wigner
