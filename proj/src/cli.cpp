#include <qarrival/arrival.hpp>
#include <qarrival/classical.hpp>
#include <qarrival/cli.hpp>
#include <qarrival/config.hpp>
#include <qarrival/csv.hpp>
#include <qarrival/errors.hpp>
#include <qarrival/mc_oracle.hpp>
#include <qarrival/quantum.hpp>
#include <qarrival/sweep.hpp>
#include <qarrival/version.hpp>
#include <qarrival/wigner.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace qarrival::io {
namespace {

struct ParamArgs {
  double sigma0 = 0.0;
  double u = 0.0;
  double C = 0.0;
  double mass_amu = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--sigma0", sigma0, "initial packet width (cm)")->required();
    app->add_option("--u", u, "group velocity (cm/s)")->required();
    app->add_option("--C", C, "squeezing parameter")->required();
    app->add_option("--mass", mass_amu, "particle mass (amu)")->required();
  }

  PacketParams build() const { return make_params(sigma0, u, C, mass_amu); }
};

std::string describe(const PacketParams& p) {
  std::ostringstream os;
  os << "sigma0 = " << p.sigma0 << " cm, u = " << p.u << " cm/s, C = " << p.C
     << ", mass = " << p.mass_amu() << " amu";
  return os.str();
}

// Writes to the file at `path`, or to `fallback` when the path is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) {
    throw ValidationError("cannot open output file: " + path);
  }
  write(f);
}

sweep::SweepSpec single_point(const PacketParams& params, double X, double t,
                              std::vector<sweep::Quantity> outputs, sweep::Grid grid) {
  sweep::SweepSpec spec;
  spec.base = params;
  spec.det.X = X;
  spec.t = t;
  spec.axis = sweep::Axis::MassAmu;
  spec.values = {params.mass_amu()};
  spec.outputs = std::move(outputs);
  spec.grid = grid;
  return spec;
}

void print_arrival(std::ostream& out, const char* label, const arrival::ArrivalResult& r) {
  out << label << ".tau_bar = " << format_double(r.tau_bar) << " s\n"
      << label << ".numerator = " << format_double(r.numerator) << " s\n"
      << label << ".denominator = " << format_double(r.denominator) << "\n"
      << label << ".negative_flux_fraction = " << format_double(r.negative_flux_fraction) << "\n";
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum and classical arrival-time distributions of free Gaussian ensembles",
               "qarrival"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  ParamArgs pa;
  std::string out_path;
  std::string context; // echoed on numerical failure

  // density
  auto* density = app.add_subcommand("density", "position densities rho_Q and rho_C at time t");
  double d_t = 0.0, d_xmin = NAN, d_xmax = NAN;
  std::size_t d_count = 201;
  pa.attach(density);
  density->add_option("--t", d_t, "evaluation time (s)")->required();
  density->add_option("--x-min", d_xmin, "grid start (cm); default u t - 6 widths");
  density->add_option("--x-max", d_xmax, "grid end (cm); default u t + 6 widths");
  density->add_option("--count", d_count, "grid points")->capture_default_str();
  density->add_option("--out", out_path, "CSV output path (default stdout)");

  // current
  auto* current = app.add_subcommand("current", "currents J_Q and J_C at the detector over time");
  double c_X = 0.0, c_tmin = NAN, c_tmax = NAN;
  std::size_t c_count = 201;
  pa.attach(current);
  current->add_option("--X", c_X, "detector location (cm)")->required();
  current->add_option("--t-min", c_tmin, "grid start (s); default 0.8 X/u");
  current->add_option("--t-max", c_tmax, "grid end (s); default 1.2 X/u");
  current->add_option("--count", c_count, "grid points")->capture_default_str();
  current->add_option("--out", out_path, "CSV output path (default stdout)");

  // wigner
  auto* wig = app.add_subcommand("wigner", "Wigner function on a phase grid plus marginal checks");
  double w_t = 0.0;
  std::size_t w_nx = 41, w_np = 41;
  pa.attach(wig);
  wig->add_option("--t", w_t, "evaluation time (s)")->required();
  wig->add_option("--nx", w_nx, "x points of the phase grid")->capture_default_str();
  wig->add_option("--np", w_np, "p points of the phase grid")->capture_default_str();
  wig->add_option("--out", out_path, "CSV output path for the phase grid");

  // arrival-time
  auto* arr = app.add_subcommand("arrival-time", "mean arrival time from J_Q and J_C");
  double a_X = 0.0, a_fixed = NAN, a_rel = 1e-9;
  std::size_t a_iters = 100000;
  pa.attach(arr);
  arr->add_option("--X", a_X, "detector location (cm)")->required();
  arr->add_option("--fixed-T", a_fixed, "fixed cutoff time (s) instead of the three-sigma rule");
  arr->add_option("--rel-tol", a_rel, "quadrature relative tolerance")->capture_default_str();
  arr->add_option("--max-cutoff-iters", a_iters, "fixed-point iteration budget")
      ->capture_default_str();

  // sweep
  auto* sw = app.add_subcommand("sweep", "run a parameter sweep from a JSON config file");
  std::string config_path;
  sw->add_option("--config", config_path, "sweep configuration (JSON)")->required();
  sw->add_option("--out", out_path, "CSV output path (overrides the config's output)");

  // mc-validate
  auto* mcv = app.add_subcommand("mc-validate", "Monte Carlo trajectory oracle vs closed forms");
  double m_X = 0.0, m_t = NAN;
  std::size_t m_count = 1000000, m_fbins = 60, m_xbins = 60;
  std::uint64_t m_seed = McSettings{}.seed;
  pa.attach(mcv);
  mcv->add_option("--X", m_X, "detector location (cm)")->required();
  mcv->add_option("--t", m_t, "time of the position histogram (s); default X/u");
  mcv->add_option("--count", m_count, "ensemble size")->capture_default_str();
  mcv->add_option("--seed", m_seed, "RNG seed")->capture_default_str();
  mcv->add_option("--flux-bins", m_fbins, "time bins for the flux")->capture_default_str();
  mcv->add_option("--x-bins", m_xbins, "position bins")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (density->parsed()) {
      const auto params = pa.build();
      context = describe(params);
      const double half = 6.0 * std::max(spread(params, d_t).width, classical::width(params, d_t));
      sweep::Grid grid{sweep::GridVariable::X,
                       std::isnan(d_xmin) ? params.u * d_t - half : d_xmin,
                       std::isnan(d_xmax) ? params.u * d_t + half : d_xmax, d_count};
      const auto result = sweep::run_sweep(
          single_point(params, 0.0, d_t, {sweep::Quantity::RhoQ, sweep::Quantity::RhoC}, grid));
      emit(out_path, out, [&](std::ostream& os) { write_csv(os, result); });
    } else if (current->parsed()) {
      const auto params = pa.build();
      context = describe(params);
      if ((std::isnan(c_tmin) || std::isnan(c_tmax)) && !(params.u > 0 && c_X > 0)) {
        throw ValidationError("--t-min/--t-max are required unless u > 0 and X > 0");
      }
      sweep::Grid grid{sweep::GridVariable::T, std::isnan(c_tmin) ? 0.8 * c_X / params.u : c_tmin,
                       std::isnan(c_tmax) ? 1.2 * c_X / params.u : c_tmax, c_count};
      const auto result = sweep::run_sweep(
          single_point(params, c_X, 0.0, {sweep::Quantity::JQ, sweep::Quantity::JC}, grid));
      emit(out_path, out, [&](std::ostream& os) { write_csv(os, result); });
    } else if (wig->parsed()) {
      const auto params = pa.build();
      context = describe(params) + ", t = " + format_double(w_t) + " s";
      if (w_nx < 2 || w_np < 2) {
        throw ValidationError("--nx and --np must be >= 2");
      }
      const auto phase = wigner::default_grid(params, w_t, w_nx, w_np, 4.0);
      double max_gap = 0.0, peak = 0.0;
      std::ostringstream rows;
      for (std::size_t j = 0; j < w_np; ++j) {
        const double p = phase.p_min + (phase.p_max - phase.p_min) * j / (w_np - 1.0);
        for (std::size_t i = 0; i < w_nx; ++i) {
          const double x = phase.x_min + (phase.x_max - phase.x_min) * i / (w_nx - 1.0);
          const double dw = wigner::closed(params, x, p, w_t);
          const double dc = classical::d_t(params, {x, p}, w_t);
          max_gap = std::max(max_gap, std::abs(dw - dc));
          peak = std::max({peak, dw, dc});
          for (auto [name, v] : {std::pair{"wigner", dw}, std::pair{"d", dc}}) {
            rows << "p," << format_double(p) << ",x," << format_double(x) << ',' << name << ','
                 << format_double(v) << ",\n";
          }
        }
      }
      if (!out_path.empty()) {
        emit(out_path, out, [&](std::ostream& os) { os << kCsvHeader << '\n' << rows.str(); });
      }

      const auto mgrid = wigner::default_grid(params, w_t, 161, 161, 8.0);
      const auto m = wigner::marginals(params, w_t, mgrid);
      auto worst = [](const std::vector<double>& got, auto&& ref, const std::vector<double>& at) {
        double top = 0.0;
        for (double a : at) {
          top = std::max(top, ref(a));
        }
        double w = 0.0;
        for (std::size_t i = 0; i < got.size(); ++i) {
          const double r = ref(at[i]);
          if (r > 1e-12 * top) {
            w = std::max(w, std::abs(got[i] - r) / r);
          }
        }
        return w;
      };
      const double x_err = worst(m.x_profile, [&](double x) { return quantum::rho(params, x, w_t); }, m.x);
      const double p_err =
          worst(m.p_profile, [&](double p) { return quantum::momentum_density(params, p); }, m.p);
      const double total = wigner::total_probability(params, w_t);
      out << "wigner.normalization = " << format_double(total) << "  "
          << verdict(std::abs(total - 1.0) <= 1e-7) << "\n"
          << "wigner.x_marginal_max_rel_err = " << format_double(x_err) << "  "
          << verdict(x_err <= 1e-8) << "\n"
          << "wigner.p_marginal_max_rel_err = " << format_double(p_err) << "  "
          << verdict(p_err <= 1e-8) << "\n"
          << "wigner.max_abs_diff_vs_classical_d = " << format_double(max_gap)
          << " (relative to peak " << format_double(peak > 0 ? max_gap / peak : 0.0) << ")\n";
    } else if (arr->parsed()) {
      const auto params = pa.build();
      DetectorConfig det;
      det.X = a_X;
      det.quad_rel_tol = a_rel;
      det.max_cutoff_iters = a_iters;
      if (!std::isnan(a_fixed)) {
        det.cutoff = Cutoff::fixed(a_fixed);
      }
      context = describe(params) + ", X = " + format_double(a_X) + " cm";
      validate(det, params);
      const auto q = arrival::mean_arrival_time(
          [&](double x, double t) { return quantum::current(params, x, t); }, params, det);
      const auto c = arrival::mean_arrival_time(
          [&](double x, double t) { return classical::current(params, x, t); }, params, det);
      out << "T_cutoff = " << format_double(q.T_cutoff) << " s\n";
      print_arrival(out, "quantum", q);
      print_arrival(out, "classical", c);
      out << "classical_point_particle X/u = " << format_double(a_X / params.u) << " s\n";
    } else if (sw->parsed()) {
      auto cfg = load_config(config_path);
      if (!out_path.empty()) {
        cfg.output = out_path;
      }
      context = to_json(cfg).dump();
      const auto result = sweep::run_sweep(cfg.sweep);
      emit(cfg.output, out, [&](std::ostream& os) { write_csv(os, result); });
      const auto failed = static_cast<std::size_t>(
          std::count_if(result.rows.begin(), result.rows.end(), [](const auto& r) { return r.failed(); }));
      if (!cfg.output.empty()) {
        nlohmann::json meta = {{"config", to_json(cfg)},
                               {"code_version", result.code_version},
                               {"rows", result.rows.size()},
                               {"failed_rows", failed}};
        emit(cfg.output + ".meta.json", out, [&](std::ostream& os) { os << meta.dump(2) << '\n'; });
        out << "wrote " << result.rows.size() << " rows (" << failed << " failed) to "
            << cfg.output << "\n";
      }
    } else if (mcv->parsed()) {
      const auto params = pa.build();
      if (!(params.u > 0 && m_X > 0)) {
        throw ValidationError("mc-validate needs u > 0 and X > 0");
      }
      DetectorConfig det;
      det.X = m_X;
      const double t_hist = std::isnan(m_t) ? m_X / params.u : m_t;
      context = describe(params) + ", X = " + format_double(m_X) + " cm, seed = " +
                std::to_string(m_seed);
      const auto sample = mc::sample_d0(params, m_count, m_seed);

      const double tc = m_X / params.u;
      const double wt = classical::width(params, tc) / params.u;
      const mc::Bins tb{std::max(0.0, tc - 4.0 * wt), tc + 4.0 * wt, m_fbins};
      const auto flux = mc::flux(sample, params, m_X, tb);
      std::vector<double> ref;
      for (std::size_t b = 0; b < tb.count; ++b) {
        ref.push_back(classical::current(params, m_X, tb.mid(b)));
      }
      const auto fc = mc::compare_flux(flux, ref, 100, 3.0);

      const double wx = classical::width(params, t_hist);
      const mc::Bins xb{params.u * t_hist - 6.5 * wx, params.u * t_hist + 6.5 * wx, m_xbins};
      const auto hist = mc::position_histogram(sample, params, xb, t_hist);
      const auto hc = mc::compare_histogram(hist, mc::classical_bin_probabilities(params, xb, t_hist), 4.0);

      const double T = arrival::cutoff_time(params, det);
      const auto tau_mc = mc::mean_arrival(sample, params, m_X, T);
      const auto tau_c = arrival::mean_arrival_time(
          [&](double x, double t) { return classical::current(params, x, t); }, params, det);
      const double z = std::abs(tau_mc.tau_bar - tau_c.tau_bar) / tau_mc.std_error;

      out << "samples = " << m_count << ", seed = " << m_seed << "\n"
          << "flux.bins_tested = " << fc.tested << ", within_3se = " << fc.within
          << ", fraction = " << format_double(fc.fraction()) << "  "
          << verdict(fc.tested > 0 && fc.fraction() >= 0.95) << "\n"
          << "histogram.bins = " << hc.tested << ", within_4se = " << hc.within
          << ", max_z = " << format_double(hc.max_abs_z) << "  " << verdict(hc.within == hc.tested)
          << "\n"
          << "tau.mc = " << format_double(tau_mc.tau_bar) << " +- "
          << format_double(tau_mc.std_error) << " s, tau.j_c = " << format_double(tau_c.tau_bar)
          << " s, z = " << format_double(z) << "  " << verdict(z <= 3.0) << "\n";
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    if (!context.empty()) {
      err << "configuration: " << context << "\n";
    }
    return kNumerical;
  }
  return kOk;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

} // namespace qarrival::io
