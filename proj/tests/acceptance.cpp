// Acceptance suite: one PASS/FAIL line per criterion, indented detail lines
// underneath. Exit status is the number of failed criteria.

#include "support/oracles.hpp"

#include <qarrival/arrival.hpp>
#include <qarrival/classical.hpp>
#include <qarrival/cli.hpp>
#include <qarrival/csv.hpp>
#include <qarrival/errors.hpp>
#include <qarrival/mc_oracle.hpp>
#include <qarrival/quantum.hpp>
#include <qarrival/wigner.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace qarrival;
namespace fs = std::filesystem;

namespace {

int g_failed = 0;

void detail(const std::string& line) { std::printf("      %s\n", line.c_str()); }

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Runs one criterion under a wall-clock budget and prints its verdict line.
void criterion(int id, const std::string& title, double budget_s,
               const std::function<bool(std::vector<std::string>&)>& body) {
  std::vector<std::string> notes;
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(notes);
  } catch (const std::exception& e) {
    notes.push_back(std::string("unexpected exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < budget_s;
  if (!in_time) {
    notes.push_back("runtime budget exceeded");
  }
  ok = ok && in_time;
  g_failed += !ok;
  std::printf("[%s] %d. %s (%.2f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              elapsed, budget_s);
  for (const auto& n : notes) {
    detail(n);
  }
  std::fflush(stdout);
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

// Sweep results read back from the CLI's CSV: quantity -> axis value -> (grid, value).
using Table = std::map<std::string, std::map<double, std::vector<std::pair<double, double>>>>;

Table run_recipe(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qarrival_acceptance";
  fs::create_directories(dir);
  const auto out = dir / (name + ".csv");
  const std::string config = (fs::path(QARRIVAL_RECIPES_DIR) / (name + ".json")).string();
  std::ostringstream so, se;
  const int code =
      io::cli_main({"qarrival", "sweep", "--config", config, "--out", out.string()}, so, se);
  if (code != io::kOk) {
    throw std::runtime_error("qarrival sweep " + config + " exited " + std::to_string(code) +
                             ": " + se.str());
  }
  std::ifstream in(out);
  Table t;
  for (const auto& rec : io::read_csv(in)) {
    if (rec.value.empty()) {
      throw std::runtime_error("recipe " + name + " produced a failed row: " + rec.error);
    }
    const double g = rec.grid_value.empty() ? 0.0 : std::stod(rec.grid_value);
    t[rec.quantity][rec.axis_value].emplace_back(g, std::stod(rec.value));
  }
  return t;
}

// sup over the grid of |a - b| per axis value.
std::map<double, double> sup_gap(const Table& t, const std::string& a, const std::string& b) {
  std::map<double, double> out;
  for (const auto& [m, rows] : t.at(a)) {
    const auto& other = t.at(b).at(m);
    double sup = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sup = std::max(sup, std::abs(rows[i].second - other[i].second));
    }
    out[m] = sup;
  }
  return out;
}

std::string ladder(const std::map<double, double>& values, const std::vector<double>& masses) {
  std::string s;
  for (double m : masses) {
    s += (s.empty() ? "" : ", ") + num(m) + " amu: " + num(values.at(m), 4);
  }
  return s;
}

bool strictly_decreasing(const std::map<double, double>& v, const std::vector<double>& masses) {
  for (std::size_t i = 1; i < masses.size(); ++i) {
    if (!(v.at(masses[i]) < v.at(masses[i - 1]))) {
      return false;
    }
  }
  return true;
}

const std::vector<double> kLadder = {1, 5, 20, 100, 1000};

} // namespace

int main() {
  std::printf("qarrival acceptance suite\n");

  criterion(1, "C = 0 equivalence of quantum and classical densities and currents", 1.0,
            [](auto& notes) {
              double worst_rho = 0, worst_j = 0;
              for (int k = 0; k < 50; ++k) {
                const double m = kLadder[k % kLadder.size()];
                const bool f1 = k % 2 == 0;
                const auto p = f1 ? oracle::fig1(m, 0) : oracle::fig2(m, 0);
                const double t = f1 ? oracle::uniform(0, 2) * oracle::kFig1Time
                                    : oracle::uniform(0, 2) * oracle::kFig2X / p.u;
                const double x = p.u * t + oracle::uniform(-3, 3) * spread(p, t).width;
                worst_rho = std::max(worst_rho,
                                     rel_diff(quantum::rho(p, x, t), classical::rho(p, x, t)));
                worst_j = std::max(worst_j, rel_diff(quantum::current(p, x, t),
                                                     classical::current(p, x, t)));
              }
              notes.push_back("max relative difference: rho " + num(worst_rho, 3) + ", J " +
                              num(worst_j, 3) + " (tolerance 1e-12)");
              return worst_rho <= 1e-12 && worst_j <= 1e-12;
            });

  criterion(2, "continuity and Liouville residuals converge at order >= 1.9", 30.0,
            [](auto& notes) {
              const auto p = oracle::fig1(1, 10);
              using Residual = std::function<double(double x, double pp, double t, double hx,
                                                    double ht)>;
              const std::vector<std::pair<std::string, Residual>> equations = {
                  {"quantum continuity",
                   [&](double x, double, double t, double hx, double ht) {
                     return oracle::quantum_continuity(p, x, t, hx, ht);
                   }},
                  {"Liouville",
                   [&](double x, double pp, double t, double hx, double ht) {
                     return oracle::liouville(p, {x, pp}, t, hx, ht);
                   }},
                  {"classical continuity",
                   [&](double x, double, double t, double hx, double ht) {
                     return oracle::classical_continuity(p, x, t, hx, ht);
                   }},
              };
              bool ok = true;
              for (const auto& [label, residual] : equations) {
                double lowest = HUGE_VAL;
                for (int k = 0; k < 25; ++k) {
                  const double t = oracle::uniform(0.2, 1.0) * oracle::kFig1Time;
                  const double w = spread(p, t).width;
                  const double x = p.u * t + oracle::uniform(-2.5, 2.5) * w;
                  const double pp = p.p_bar() + oracle::uniform(-2, 2) * p.sigma_p();
                  const auto orders = oracle::measured_orders([&](double s) {
                    return residual(x, pp, t, s * w / 1e4, s * t / 1e4);
                  });
                  lowest = std::min({lowest, orders[0], orders[1]});
                }
                notes.push_back(label + ": lowest measured order over 25 points " +
                                num(lowest, 4));
                ok = ok && lowest >= 1.9;
              }
              return ok;
            });

  criterion(3, "normalization of rho_Q, rho_C, D and D_W", 60.0, [](auto& notes) {
    const auto p = oracle::fig1(1, 10);
    quad::Options opt;
    opt.rel_tol = 1e-10;
    bool ok = true;
    for (double t : {0.0, 1e-5, 1e-3}) {
      const double w = std::max(spread(p, t).width, classical::width(p, t));
      const double nq =
          oracle::integrate_profile([&](double x) { return quantum::rho(p, x, t); }, p.u * t, w);
      const double nc = oracle::integrate_profile(
          [&](double x) { return classical::rho(p, x, t); }, p.u * t, w);
      const double nd = oracle::phase_space_total(p, t);
      const double nw = wigner::total_probability(p, t, opt);
      notes.push_back("t = " + num(t) + " s: |1 - int rho_Q| " + num(std::abs(nq - 1), 3) +
                      ", |1 - int rho_C| " + num(std::abs(nc - 1), 3) + ", |1 - int D| " +
                      num(std::abs(nd - 1), 3) + ", |1 - int D_W| " + num(std::abs(nw - 1), 3));
      ok = ok && std::abs(nq - 1) <= 1e-9 && std::abs(nc - 1) <= 1e-9 &&
           std::abs(nd - 1) <= 1e-7 && std::abs(nw - 1) <= 1e-7;
    }
    return ok;
  });

  criterion(4, "Wigner closed form vs quadrature, marginals vs rho_Q and |phi0|^2", 60.0,
            [](auto& notes) {
              const auto p = oracle::fig1(1, 10);
              const double t = oracle::kFig1Time;
              double worst = 0, worst_imag = 0;
              for (int k = 0; k < 10; ++k) {
                const double q = oracle::uniform(-2, 2) * p.sigma_p();
                const double centre =
                    p.u * t + q * t / p.mass + 2 * p.C * q * p.sigma0 * p.sigma0 / p.hbar;
                const double x = centre + oracle::uniform(-2, 2) * p.sigma0;
                const auto quad_value = wigner::quadrature_detail(p, x, p.p_bar() + q, t);
                const double closed = wigner::closed(p, x, p.p_bar() + q, t);
                worst = std::max(worst, std::abs(quad_value.value - closed) / std::abs(closed));
                worst_imag = std::max(worst_imag, quad_value.imag_residue / std::abs(closed));
              }
              notes.push_back("closed vs quadrature, max relative difference " + num(worst, 3) +
                              " (tolerance 1e-7); imaginary residue " + num(worst_imag, 3));

              const auto m = wigner::marginals(p, t, wigner::default_grid(p, t, 81, 81));
              double x_err = 0, p_err = 0;
              const double x_peak = quantum::rho(p, p.u * t, t);
              const double p_peak = quantum::momentum_density(p, p.p_bar());
              // Relative error at profile points above 1e-12 of the peak.
              auto rel = [](double got, double ref, double peak) {
                return ref > 1e-12 * peak ? std::abs(got - ref) / ref : 0.0;
              };
              for (std::size_t i = 0; i < m.x.size(); ++i) {
                x_err = std::max(x_err, rel(m.x_profile[i], quantum::rho(p, m.x[i], t), x_peak));
              }
              for (std::size_t i = 0; i < m.p.size(); ++i) {
                p_err = std::max(
                    p_err, rel(m.p_profile[i], quantum::momentum_density(p, m.p[i]), p_peak));
              }
              notes.push_back("marginals, max relative error where the profile exceeds 1e-12 "
                              "of its peak: x " +
                              num(x_err, 3) + ", p " + num(p_err, 3) + " (tolerance 1e-8)");
              return worst <= 1e-7 && worst_imag <= 1e-10 && x_err <= 1e-8 && p_err <= 1e-8;
            });

  criterion(5, "Fig. 1: sup|rho_Q - rho_C| strictly decreasing along {1, 5, 20, 100, 1000} amu",
            1.0, [](auto& notes) {
              const auto table = run_recipe("fig1");
              const auto gap = sup_gap(table, "rho_q", "rho_c");
              notes.push_back("sup gap (1/cm): " + ladder(gap, kLadder));
              const std::vector<double> tail = {5, 20, 100, 1000};
              notes.push_back(std::string("decreasing from 5 amu on: ") +
                              (strictly_decreasing(gap, tail) ? "yes" : "no"));
              return strictly_decreasing(gap, kLadder);
            });

  criterion(6, "Fig. 2: sup|J_Q - J_C| strictly decreasing along {1, 5, 20, 100, 1000} amu",
            1.0, [](auto& notes) {
              const auto table = run_recipe("fig2");
              const auto gap = sup_gap(table, "j_q", "j_c");
              notes.push_back("sup gap (1/s): " + ladder(gap, kLadder));
              const std::vector<double> tail = {5, 20, 100, 1000};
              notes.push_back(std::string("decreasing from 5 amu on: ") +
                              (strictly_decreasing(gap, tail) ? "yes" : "no"));
              return strictly_decreasing(gap, kLadder);
            });

  criterion(7, "Fig. 3: |tau_Q - tau_C| non-increasing over {1, 10, 100, 1000} amu, "
               "tau_C(1e6 amu) = X/u within 1%",
            60.0, [](auto& notes) {
              const std::vector<double> masses = {1, 10, 100, 1000};
              bool ok = true;
              for (const std::string X : {"5.1", "5.2", "5.3"}) {
                const auto table = run_recipe("fig3_X" + X);
                std::map<double, double> tau_q, tau_c, gap, from_classical;
                for (const auto& [m, rows] : table.at("tau_q")) {
                  tau_q[m] = rows.front().second;
                  tau_c[m] = table.at("tau_c").at(m).front().second;
                  gap[m] = std::abs(tau_q[m] - tau_c[m]);
                  from_classical[m] = std::abs(tau_q[m] - std::stod(X) / 10.0);
                }
                bool monotone = true;
                for (std::size_t i = 1; i < masses.size(); ++i) {
                  monotone = monotone && gap.at(masses[i]) <= gap.at(masses[i - 1]);
                }
                const double limit = std::stod(X) / 10.0;
                const double heavy = tau_c.at(1e6);
                const bool limit_ok = std::abs(heavy - limit) <= 0.01 * limit;
                notes.push_back("X = " + X + " cm: |tau_Q - tau_C| (s) " + ladder(gap, masses));
                notes.push_back("X = " + X + " cm: |tau_Q - X/u| (s) " +
                                ladder(from_classical, masses));
                notes.push_back("X = " + X + " cm: tau_C(1e6 amu) = " + num(heavy, 10) +
                                " s vs X/u = " + num(limit) + " s");
                // The criterion names X = 5.1 cm; the other detectors are reported only.
                if (X == "5.1") {
                  ok = monotone && limit_ok;
                }
              }
              return ok;
            });

  criterion(8, "Monte Carlo oracle: binned flux vs J_C and position histograms", 120.0,
            [](auto& notes) {
              const auto p = oracle::fig3(100, 10);
              const double X = 5.1;
              const auto sample = mc::sample_d0(p, 1000000, 20240229);

              const double tc = X / p.u, wt = classical::width(p, tc) / p.u;
              const mc::Bins tb{tc - 4 * wt, tc + 4 * wt, 60};
              const auto est = mc::flux(sample, p, X, tb);
              std::vector<double> ref;
              for (std::size_t b = 0; b < tb.count; ++b) {
                ref.push_back(classical::current(p, X, tb.mid(b)));
              }
              const auto fc = mc::compare_flux(est, ref, 100, 3.0);
              notes.push_back("flux: " + std::to_string(fc.within) + " of " +
                              std::to_string(fc.tested) + " bins with >= 100 crossings within 3 se (" +
                              num(100 * fc.fraction(), 4) + "%), max |z| " + num(fc.max_abs_z, 3));
              bool ok = fc.tested > 0 && fc.fraction() >= 0.95;

              for (double t : {0.0, tc}) {
                const double w = classical::width(p, t);
                const mc::Bins xb{p.u * t - 6.5 * w, p.u * t + 6.5 * w, 60};
                const auto h = mc::position_histogram(sample, p, xb, t);
                const auto hc =
                    mc::compare_histogram(h, mc::classical_bin_probabilities(p, xb, t), 4.0);
                notes.push_back("histogram at t = " + num(t) + " s: " + std::to_string(hc.within) +
                                " of " + std::to_string(hc.tested) + " bins within 4 sd, max |z| " +
                                num(hc.max_abs_z, 3));
                ok = ok && hc.within == hc.tested;
              }

              const auto f1 = oracle::fig1(1, 10);
              const auto s1 = mc::sample_d0(f1, 1000000, 20240301);
              const double t1 = oracle::kFig1Time, w1 = classical::width(f1, t1);
              const mc::Bins xb1{f1.u * t1 - 6.5 * w1, f1.u * t1 + 6.5 * w1, 60};
              const auto h1 = mc::position_histogram(s1, f1, xb1, t1);
              const auto c1 =
                  mc::compare_histogram(h1, mc::classical_bin_probabilities(f1, xb1, t1), 4.0);
              notes.push_back("Fig. 1 histogram (1 amu, t = 1e-5 s): " + std::to_string(c1.within) +
                              " of " + std::to_string(c1.tested) + " bins within 4 sd, max |z| " +
                              num(c1.max_abs_z, 3));
              return ok && c1.within == c1.tested;
            });

  criterion(9, "cutoff fixed point residual and documented non-convergence", 1.0,
            [](auto& notes) {
              double worst = 0;
              std::size_t checked = 0;
              for (double m : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 1e6}) {
                for (double X : {5.1, 5.2, 5.3}) {
                  const auto p = oracle::fig3(m, 10);
                  DetectorConfig d;
                  d.X = X;
                  const double T = arrival::cutoff_time(p, d);
                  const double r = std::abs(T - (X + 3 * spread(p, T).width) / p.u);
                  worst = std::max(worst, r / T);
                  ++checked;
                }
              }
              notes.push_back("max |T - (X + 3 sigma(T))/u| / T over " + std::to_string(checked) +
                              " configurations: " + num(worst, 3) + " (tolerance 1e-12)");

              bool threw = false;
              try {
                DetectorConfig d;
                d.X = 5.1;
                arrival::cutoff_time(make_params(1e-4, 10, 1e4, 1e-6), d);
              } catch (const CutoffNonConvergence& e) {
                threw = true;
                notes.push_back(std::string("m = 1e-6 amu, C = 1e4: ") + e.what());
              }
              if (!threw) {
                notes.push_back("pathological configuration did not raise CutoffNonConvergence");
              }
              return worst < 1e-12 && threw;
            });

  std::printf("%d criteria failed\n", g_failed);
  return g_failed;
}
