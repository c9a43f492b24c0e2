#include <qarrival/arrival.hpp>
#include <qarrival/errors.hpp>
#include <qarrival/quadrature.hpp>
#include <qarrival/quantum.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace qarrival::arrival {
namespace {

// Panel edges around the classical passage time X/u, where |J| is concentrated.
std::vector<double> passage_breakpoints(const PacketParams& params, double X, double T) {
  std::vector<double> pts;
  if (params.u <= 0.0 || X <= 0.0) {
    return pts;
  }
  const double tc = X / params.u;
  const double wt = spread(params, tc).width / params.u;
  for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
    const double p = tc + k * wt;
    if (p > 0.0 && p < T) {
      pts.push_back(p);
    }
  }
  return pts;
}

ArrivalResult finish(double numerator, double denominator, double negative, double T,
                     const PacketParams& params, const DetectorConfig& det) {
  if (!(denominator >= det.quad_abs_tol) || denominator == 0.0) {
    std::ostringstream msg;
    msg << "arrival-time denominator int|J|dt = " << denominator << " below floor "
        << det.quad_abs_tol << " (X = " << det.X << " cm, T = " << T << " s, m = "
        << params.mass_amu() << " amu): packet never meaningfully reaches the detector";
    throw DenominatorVanishes(msg.str());
  }
  return {numerator / denominator, T, numerator, denominator,
          std::clamp(negative / denominator, 0.0, 1.0)};
}

} // namespace

double cutoff_time(const PacketParams& params, const DetectorConfig& det) {
  validate(det, params);
  if (det.cutoff.policy == CutoffPolicy::FixedT) {
    return det.cutoff.fixed_T;
  }
  double T = det.X / params.u;
  for (std::size_t i = 0; i < det.max_cutoff_iters; ++i) {
    const double next = (det.X + 3.0 * spread(params, T).width) / params.u;
    if (!std::isfinite(next)) {
      break;
    }
    if (std::abs(next - T) < 1e-12 * std::abs(next)) {
      return next;
    }
    T = next;
  }
  std::ostringstream msg;
  msg << "three-sigma cutoff did not converge in " << det.max_cutoff_iters
      << " iterations (X = " << det.X << " cm, u = " << params.u << " cm/s, C = " << params.C
      << ", m = " << params.mass_amu() << " amu, last T = " << T
      << " s): spreading outruns transport, use a fixed cutoff";
  throw CutoffNonConvergence(msg.str());
}

ArrivalResult mean_arrival_time(const CurrentFn& current, const PacketParams& params,
                                const DetectorConfig& det) {
  const double T = cutoff_time(params, det);
  const double X = det.X;
  const auto breaks = passage_breakpoints(params, X, T);

  quad::Options opt;
  opt.rel_tol = det.quad_rel_tol;
  opt.abs_tol = det.quad_abs_tol;
  opt.initial_panels = 16;

  const auto den = quad::integrate([&](double t) { return std::abs(current(X, t)); }, 0.0, T, opt,
                                   breaks);
  const auto num = quad::integrate([&](double t) { return t * std::abs(current(X, t)); }, 0.0, T,
                                   opt, breaks);
  // The negative part is a diagnostic; its tolerance is relative to the full flux.
  quad::Options neg_opt = opt;
  neg_opt.abs_tol = std::max(opt.abs_tol, opt.rel_tol * den.value);
  const auto neg = quad::integrate([&](double t) { return std::max(-current(X, t), 0.0); }, 0.0,
                                   T, neg_opt, breaks);
  return finish(num.value, den.value, neg.value, T, params, det);
}

ArrivalResult mean_arrival_time_fixed(const CurrentFn& current, const PacketParams& params,
                                      const DetectorConfig& det, std::size_t panels) {
  const double T = cutoff_time(params, det);
  const double X = det.X;
  const double den =
      quad::integrate_fixed([&](double t) { return std::abs(current(X, t)); }, 0.0, T, panels);
  const double num =
      quad::integrate_fixed([&](double t) { return t * std::abs(current(X, t)); }, 0.0, T, panels);
  const double neg = quad::integrate_fixed(
      [&](double t) { return std::max(-current(X, t), 0.0); }, 0.0, T, panels);
  return finish(num, den, neg, T, params, det);
}

} // namespace qarrival::arrival
