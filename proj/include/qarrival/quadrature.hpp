#pragma once

// Globally adaptive Simpson quadrature with a Richardson error estimate.
//
// Each interval carries the one-panel Simpson value S1 and the two-panel value
// S2. The difference (S2 - S1)/15 estimates the error of S2 and is also added
// to it (Richardson extrapolation, which gives Boole's rule). The interval with
// the largest estimated error is bisected until the summed estimate drops below
// max(abs_tol, rel_tol * |I|).

#include <qarrival/errors.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <sstream>
#include <type_traits>
#include <utility>
#include <vector>

namespace qarrival::quad {

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 1e-30;
  int max_depth = 50;                ///< bisection levels below an initial panel
  std::size_t initial_panels = 8;    ///< uniform panels laid over [a,b] before adapting
  std::size_t max_intervals = 1 << 20;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
  double a, b;
  T fa, f1, fm, f3, fb; // at a, a+h/4, a+h/2, a+3h/4, b
  T estimate;
  double error;
  int depth;
};

template <class T>
Panel<T> make_panel(double a, double b, T fa, T f1, T fm, T f3, T fb, int depth) {
  const double h = b - a;
  const T s1 = (h / 6.0) * (fa + 4.0 * fm + fb);
  const T s2 = (h / 12.0) * (fa + 4.0 * f1 + 2.0 * fm + 4.0 * f3 + fb);
  const T diff = s2 - s1;
  return {a, b, fa, f1, fm, f3, fb, s2 + diff / 15.0, magnitude(diff) / 15.0, depth};
}

template <class T>
struct ByError {
  bool operator()(const Panel<T>& l, const Panel<T>& r) const { return l.error < r.error; }
};

} // namespace detail

/// Integrates f over [a, b]. Breakpoints strictly inside (a, b) become panel
/// edges; use them to pin narrow features the initial sampling could miss.
/// Throws QuadratureFailure when the depth or interval budget runs out.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {},
               std::span<const double> breakpoints = {})
    -> Result<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  Result<T> out;
  if (a == b) {
    return out;
  }
  if (a > b) {
    auto r = integrate(std::forward<F>(f), b, a, opt, breakpoints);
    r.value = -r.value;
    return r;
  }

  std::vector<double> edges;
  const std::size_t n0 = std::max<std::size_t>(opt.initial_panels, 1);
  for (std::size_t i = 0; i <= n0; ++i) {
    edges.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n0));
  }
  edges.back() = b;
  for (double p : breakpoints) {
    if (p > a && p < b) {
      edges.push_back(p);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<detail::Panel<T>, std::vector<detail::Panel<T>>, detail::ByError<T>> heap;
  std::size_t evals = 0;
  auto eval = [&](double x) {
    ++evals;
    return static_cast<T>(f(x));
  };

  T total{};
  double total_err = 0.0;
  T fa = eval(edges.front());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const double h = hi - lo;
    const T f1 = eval(lo + 0.25 * h), fm = eval(lo + 0.5 * h), f3 = eval(lo + 0.75 * h);
    const T fb = eval(hi);
    auto panel = detail::make_panel(lo, hi, fa, f1, fm, f3, fb, 0);
    total += panel.estimate;
    total_err += panel.error;
    heap.push(panel);
    fa = fb;
  }

  auto converged = [&] {
    return total_err <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total));
  };

  while (!converged()) {
    auto worst = heap.top();
    if (worst.depth >= opt.max_depth || heap.size() >= opt.max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b << "] did not reach tolerance"
          << " (estimated error " << total_err << ", |I| ~ " << detail::magnitude(total)
          << ", worst panel [" << worst.a << ", " << worst.b << "] at depth " << worst.depth << ")";
      throw QuadratureFailure(msg.str());
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double h = 0.5 * (worst.b - worst.a);
    auto left = detail::make_panel(worst.a, mid, worst.fa, eval(worst.a + 0.25 * h), worst.f1,
                                   eval(worst.a + 0.75 * h), worst.fm, worst.depth + 1);
    auto right = detail::make_panel(mid, worst.b, worst.fm, eval(mid + 0.25 * h), worst.f3,
                                    eval(mid + 0.75 * h), worst.fb, worst.depth + 1);
    total += left.estimate + right.estimate - worst.estimate;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to drop the drift of the running totals.
  out.intervals = heap.size();
  std::vector<detail::Panel<T>> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const auto& l, const auto& r) { return l.a < r.a; });
  for (const auto& p : panels) {
    out.value += p.estimate;
    out.error += p.error;
  }
  out.evaluations = evals;
  return out;
}

/// Composite Simpson rule on a fixed uniform grid of `panels` panels (rounded up to even).
template <class F>
auto integrate_fixed(F&& f, double a, double b, std::size_t panels)
    -> std::decay_t<std::invoke_result_t<F&, double>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  std::size_t n = std::max<std::size_t>(panels, 2);
  n += n % 2;
  const double h = (b - a) / static_cast<double>(n);
  T sum = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) {
    const double x = a + h * static_cast<double>(i);
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(x);
  }
  return sum * (h / 3.0);
}

/// Iterated integral  int_{a}^{b} dx int_{lo(x)}^{hi(x)} f(x, y) dy.
/// `inner_range(x)` returns the pair (lo, hi). The inner tolerance is set a
/// decade tighter than the outer one.
template <class F, class Range>
double integrate_nested(F&& f, double a, double b, Range&& inner_range, const Options& opt = {},
                        std::span<const double> outer_breakpoints = {}) {
  Options inner = opt;
  inner.rel_tol = opt.rel_tol * 0.1;
  auto outer_fn = [&](double x) {
    const auto [lo, hi] = inner_range(x);
    return integrate([&](double y) { return f(x, y); }, lo, hi, inner).value;
  };
  return integrate(outer_fn, a, b, opt, outer_breakpoints).value;
}

} // namespace qarrival::quad
