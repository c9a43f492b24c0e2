#pragma once

#include <cstddef>

namespace qarrival {

// CGS throughout: cm, g, s, erg.
inline constexpr double kHbarCgs = 1.054571817e-27;  // erg s
inline constexpr double kAmuGrams = 1.66053906660e-24;

/// Defining parameters of the Gaussian ensemble, shared by the quantum and
/// classical descriptions. Construct through make_params / make_params_with_hbar.
struct PacketParams {
  double sigma0 = 0.0; ///< initial width (cm)
  double u = 0.0;      ///< group velocity (cm/s)
  double C = 0.0;      ///< squeezing / correlation parameter
  double mass = 0.0;   ///< g
  double hbar = kHbarCgs;

  double p_bar() const { return mass * u; }
  double wave_number() const { return p_bar() / hbar; }
  double mass_amu() const { return mass / kAmuGrams; }
  /// Standard deviation of the (time independent) momentum distribution.
  double sigma_p() const { return hbar / (2.0 * sigma0); }

  bool operator==(const PacketParams&) const = default;
};

/// Builds params from laboratory units; mass is given in amu.
/// Throws ValidationError naming the offending field.
PacketParams make_params(double sigma0_cm, double u_cm_per_s, double C, double mass_amu);

/// Same validation, but mass in grams and an explicit hbar (lets tests use hbar = 1).
PacketParams make_params_with_hbar(double sigma0, double u, double C, double mass, double hbar);

/// Re-runs the field checks on an already-built value.
void validate(const PacketParams& params);

/// Delta x * Delta p of the initial state: (hbar/2) sqrt(1 + C^2).
double uncertainty_product(const PacketParams& params);

enum class CutoffPolicy { ThreeSigma, FixedT };

struct Cutoff {
  CutoffPolicy policy = CutoffPolicy::ThreeSigma;
  double fixed_T = 0.0; ///< s, used only by FixedT

  static Cutoff three_sigma() { return {}; }
  static Cutoff fixed(double T) { return {CutoffPolicy::FixedT, T}; }

  bool operator==(const Cutoff&) const = default;
};

/// Detector location and the controls for the time integration.
struct DetectorConfig {
  double X = 0.0; ///< cm
  Cutoff cutoff;
  double quad_rel_tol = 1e-9;
  double quad_abs_tol = 1e-30;
  std::size_t max_cutoff_iters = 100000;

  bool operator==(const DetectorConfig&) const = default;
};

void validate(const DetectorConfig& det, const PacketParams& params);

} // namespace qarrival
