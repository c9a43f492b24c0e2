#include <qarrival/errors.hpp>
#include <qarrival/units.hpp>

#include <cmath>
#include <sstream>
#include <string>

namespace qarrival {
namespace {

void require(bool ok, const std::string& field, double value, const char* what) {
  if (!ok) {
    std::ostringstream msg;
    msg << field << " = " << value << ": " << what;
    throw ValidationError(msg.str());
  }
}

} // namespace

void validate(const PacketParams& p) {
  require(std::isfinite(p.sigma0) && p.sigma0 > 0, "sigma0", p.sigma0, "must be finite and > 0");
  require(std::isfinite(p.mass) && p.mass > 0, "mass", p.mass, "must be finite and > 0");
  require(std::isfinite(p.hbar) && p.hbar > 0, "hbar", p.hbar, "must be finite and > 0");
  require(std::isfinite(p.u), "u", p.u, "must be finite");
  require(std::isfinite(p.C), "C", p.C, "must be finite");
  require(std::isfinite(p.p_bar()) && std::isfinite(p.wave_number()), "u", p.u,
          "derived mean momentum / wave number overflow");
}

PacketParams make_params_with_hbar(double sigma0, double u, double C, double mass, double hbar) {
  PacketParams p{sigma0, u, C, mass, hbar};
  validate(p);
  return p;
}

PacketParams make_params(double sigma0_cm, double u_cm_per_s, double C, double mass_amu) {
  require(std::isfinite(mass_amu) && mass_amu > 0, "mass_amu", mass_amu, "must be finite and > 0");
  return make_params_with_hbar(sigma0_cm, u_cm_per_s, C, mass_amu * kAmuGrams, kHbarCgs);
}

double uncertainty_product(const PacketParams& params) {
  return 0.5 * params.hbar * std::sqrt(1.0 + params.C * params.C);
}

void validate(const DetectorConfig& det, const PacketParams& params) {
  require(std::isfinite(det.X), "X", det.X, "must be finite");
  require(det.quad_rel_tol > 0, "quad_rel_tol", det.quad_rel_tol, "must be > 0");
  require(det.quad_abs_tol >= 0, "quad_abs_tol", det.quad_abs_tol, "must be >= 0");
  require(det.max_cutoff_iters >= 1, "max_cutoff_iters", static_cast<double>(det.max_cutoff_iters),
          "must be >= 1");
  if (det.cutoff.policy == CutoffPolicy::ThreeSigma) {
    require(params.u > 0, "u", params.u, "three-sigma cutoff needs u > 0 (packet must approach X)");
  } else {
    require(std::isfinite(det.cutoff.fixed_T) && det.cutoff.fixed_T > 0, "fixed_T",
            det.cutoff.fixed_T, "must be finite and > 0");
  }
}

} // namespace qarrival
