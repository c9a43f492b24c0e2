#pragma once

#include <qarrival/classical.hpp>
#include <qarrival/units.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace qarrival::mc {

/// Initial conditions drawn from the classical initial density. Identical
/// (params, count, seed) give bit-identical points regardless of thread count.
struct EnsembleSample {
  std::vector<PhasePoint> points;
  std::uint64_t seed = 0;

  std::size_t count() const { return points.size(); }
};

/// Throws ValidationError when count == 0.
EnsembleSample sample_d0(const PacketParams& params, std::size_t count, std::uint64_t seed,
                         unsigned threads = 0);

/// Uniform bins on [lo, hi).
struct Bins {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;

  double width() const { return (hi - lo) / static_cast<double>(count); }
  double edge(std::size_t i) const { return lo + width() * static_cast<double>(i); }
  double mid(std::size_t i) const { return lo + width() * (static_cast<double>(i) + 0.5); }
  std::optional<std::size_t> index(double v) const;
};

struct DensityHistogram {
  Bins bins;
  std::vector<std::uint64_t> counts;
  std::vector<double> density;   ///< 1/cm, normalized over the in-range particles
  std::vector<double> std_error; ///< binomial, same units
  std::uint64_t in_range = 0;
};

/// Histogram of free-flight positions x0 + p0 t / m. The bins must cover
/// u t +- 6 classical widths (ValidationError otherwise).
DensityHistogram position_histogram(const EnsembleSample& sample, const PacketParams& params,
                                    const Bins& x_bins, double t);

struct FluxEstimate {
  double value = 0.0;     ///< 1/s
  double std_error = 0.0; ///< 1/s
  std::uint64_t n_crossings = 0;
};

/// Time at which the free trajectory from `pt` passes X, if it ever does.
std::optional<double> crossing_time(const PacketParams& params, PhasePoint pt, double X);

/// Net signed crossings of X per particle per unit time, per time bin.
/// p0 > 0 counts +1, p0 < 0 counts -1.
std::vector<FluxEstimate> flux(const EnsembleSample& sample, const PacketParams& params, double X,
                               const Bins& t_bins);

struct ArrivalEstimate {
  double tau_bar = 0.0;
  double std_error = 0.0;
  std::uint64_t n_crossings = 0;
};

/// Mean crossing time on [0, T], each crossing weighted by its sign times the
/// sign of the net flux in its bin, so the weights integrate |J|. `bins` bins
/// partition [0, T].
ArrivalEstimate mean_arrival(const EnsembleSample& sample, const PacketParams& params, double X,
                             double T, std::size_t bins = 400);

struct BinComparison {
  std::size_t tested = 0;
  std::size_t within = 0;
  double max_abs_z = 0.0;

  double fraction() const { return tested ? static_cast<double>(within) / tested : 0.0; }
};

/// Bins with at least `min_crossings` crossings are tested for
/// |estimate - reference| <= n_sigma * std_error.
BinComparison compare_flux(const std::vector<FluxEstimate>& estimates,
                           const std::vector<double>& reference, std::uint64_t min_crossings,
                           double n_sigma);

/// Per-bin binomial test of the counts against model bin probabilities.
BinComparison compare_histogram(const DensityHistogram& h, const std::vector<double>& probability,
                                double n_sigma);

/// Exact Gaussian mass of the classical position marginal in each bin,
/// renormalized to the mass inside [lo, hi).
std::vector<double> classical_bin_probabilities(const PacketParams& params, const Bins& bins,
                                                double t);

} // namespace qarrival::mc
