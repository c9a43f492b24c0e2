#include <qarrival/errors.hpp>
#include <qarrival/mc_oracle.hpp>
#include <qarrival/parallel.hpp>

#include <cmath>
#include <random>
#include <sstream>

namespace qarrival::mc {
namespace {

// Fixed chunking keeps the stream assignment independent of the thread count.
constexpr std::size_t kChunk = std::size_t{1} << 16;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

template <class Fn>
void for_each_chunk(std::size_t n, Fn&& fn) {
  parallel_for(chunk_count(n), [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    fn(c, begin, std::min(n, begin + kChunk));
  });
}

void check_bins(const Bins& b, const char* name) {
  if (b.count == 0 || !(b.hi > b.lo)) {
    std::ostringstream msg;
    msg << name << " bins [" << b.lo << ", " << b.hi << ") x " << b.count << " are empty";
    throw ValidationError(msg.str());
  }
}

} // namespace

std::optional<std::size_t> Bins::index(double v) const {
  if (!(v >= lo) || !(v < hi)) {
    return std::nullopt;
  }
  const auto i = static_cast<std::size_t>((v - lo) / width());
  return std::min(i, count - 1);
}

EnsembleSample sample_d0(const PacketParams& params, std::size_t count, std::uint64_t seed,
                         unsigned threads) {
  if (count == 0) {
    throw ValidationError("sample count must be >= 1");
  }
  EnsembleSample out;
  out.seed = seed;
  out.points.resize(count);
  const double sd_x = params.sigma0 * std::sqrt(1.0 + params.C * params.C);
  const double sd_p = params.sigma_p();
  parallel_for(
      chunk_count(count),
      [&](std::size_t c) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(c)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        const std::size_t end = std::min(count, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
          const double zx = gauss(rng);
          const double zp = gauss(rng);
          out.points[i] = {sd_x * zx, params.p_bar() + sd_p * zp};
        }
      },
      threads);
  return out;
}

DensityHistogram position_histogram(const EnsembleSample& sample, const PacketParams& params,
                                    const Bins& x_bins, double t) {
  check_bins(x_bins, "position");
  const double center = params.u * t;
  const double reach = 6.0 * classical::width(params, t);
  if (x_bins.lo > center - reach || x_bins.hi < center + reach) {
    std::ostringstream msg;
    msg << "position bins [" << x_bins.lo << ", " << x_bins.hi << ") do not cover u t +- 6 widths ["
        << center - reach << ", " << center + reach << "]";
    throw ValidationError(msg.str());
  }

  const std::size_t n = sample.count();
  std::vector<std::vector<std::uint64_t>> partial(chunk_count(n),
                                                  std::vector<std::uint64_t>(x_bins.count, 0));
  for_each_chunk(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& pt = sample.points[i];
      if (auto b = x_bins.index(pt.x + pt.p * t / params.mass)) {
        ++partial[c][*b];
      }
    }
  });

  DensityHistogram h;
  h.bins = x_bins;
  h.counts.assign(x_bins.count, 0);
  for (const auto& part : partial) {
    for (std::size_t b = 0; b < x_bins.count; ++b) {
      h.counts[b] += part[b];
    }
  }
  for (auto c : h.counts) {
    h.in_range += c;
  }
  const double total = static_cast<double>(h.in_range);
  const double bw = x_bins.width();
  for (auto c : h.counts) {
    const double frac = total > 0 ? static_cast<double>(c) / total : 0.0;
    h.density.push_back(frac / bw);
    h.std_error.push_back(total > 0 ? std::sqrt(frac * (1.0 - frac) / total) / bw : 0.0);
  }
  return h;
}

std::optional<double> crossing_time(const PacketParams& params, PhasePoint pt, double X) {
  if (pt.p == 0.0) {
    return std::nullopt;
  }
  const double t = (X - pt.x) * params.mass / pt.p;
  if (!(t >= 0.0) || !std::isfinite(t)) {
    return std::nullopt;
  }
  return t;
}

std::vector<FluxEstimate> flux(const EnsembleSample& sample, const PacketParams& params, double X,
                               const Bins& t_bins) {
  check_bins(t_bins, "time");
  struct Tally {
    std::int64_t net = 0;
    std::uint64_t crossings = 0;
  };
  const std::size_t n = sample.count();
  std::vector<std::vector<Tally>> partial(chunk_count(n), std::vector<Tally>(t_bins.count));
  for_each_chunk(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& pt = sample.points[i];
      const auto t = crossing_time(params, pt, X);
      if (!t) {
        continue;
      }
      if (auto b = t_bins.index(*t)) {
        partial[c][*b].net += pt.p > 0 ? 1 : -1;
        ++partial[c][*b].crossings;
      }
    }
  });

  const double N = static_cast<double>(n);
  const double bw = t_bins.width();
  std::vector<FluxEstimate> out(t_bins.count);
  for (std::size_t b = 0; b < t_bins.count; ++b) {
    Tally tally;
    for (const auto& part : partial) {
      tally.net += part[b].net;
      tally.crossings += part[b].crossings;
    }
    const double mean = static_cast<double>(tally.net) / N;
    auto& est = out[b];
    est.value = mean / bw;
    est.n_crossings = tally.crossings;
    if (tally.crossings == 0) {
      est.std_error = 1.0 / (N * bw);
    } else {
      // Per-particle contributions are -1, 0 or +1.
      const double second = static_cast<double>(tally.crossings) / N;
      const double var = std::max(second - mean * mean, 0.0) * N / std::max(N - 1.0, 1.0);
      est.std_error = std::sqrt(var / N) / bw;
    }
  }
  return out;
}

ArrivalEstimate mean_arrival(const EnsembleSample& sample, const PacketParams& params, double X,
                             double T, std::size_t bins) {
  const Bins t_bins{0.0, T, bins};
  check_bins(t_bins, "arrival");
  const auto binned = flux(sample, params, X, t_bins);

  struct Sums {
    double a = 0.0, b = 0.0;
    std::uint64_t crossings = 0;
  };
  auto weight = [&](const PhasePoint& pt, double t) -> double {
    const auto bin = t_bins.index(t);
    if (!bin) {
      return 0.0;
    }
    const double net = binned[*bin].value;
    const double sign_net = net > 0 ? 1.0 : (net < 0 ? -1.0 : 0.0);
    return (pt.p > 0 ? 1.0 : -1.0) * sign_net;
  };

  const std::size_t n = sample.count();
  std::vector<Sums> partial(chunk_count(n));
  for_each_chunk(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& pt = sample.points[i];
      if (const auto t = crossing_time(params, pt, X)) {
        const double w = weight(pt, *t);
        partial[c].a += w * *t;
        partial[c].b += w;
        partial[c].crossings += w != 0.0;
      }
    }
  });
  Sums total;
  for (const auto& p : partial) {
    total.a += p.a;
    total.b += p.b;
    total.crossings += p.crossings;
  }
  ArrivalEstimate est;
  est.n_crossings = total.crossings;
  if (total.b == 0.0) {
    std::ostringstream msg;
    msg << "no crossings of X = " << X << " cm within [0, " << T << "] s";
    throw DenominatorVanishes(msg.str());
  }
  est.tau_bar = total.a / total.b;

  std::vector<double> resid(chunk_count(n), 0.0);
  for_each_chunk(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& pt = sample.points[i];
      if (const auto t = crossing_time(params, pt, X)) {
        const double w = weight(pt, *t);
        const double r = w * (*t - est.tau_bar);
        resid[c] += r * r;
      }
    }
  });
  double ss = 0.0;
  for (double r : resid) {
    ss += r;
  }
  est.std_error = std::sqrt(ss) / std::abs(total.b);
  return est;
}

BinComparison compare_flux(const std::vector<FluxEstimate>& estimates,
                           const std::vector<double>& reference, std::uint64_t min_crossings,
                           double n_sigma) {
  if (estimates.size() != reference.size()) {
    throw ValidationError("flux comparison: estimate and reference sizes differ");
  }
  BinComparison out;
  for (std::size_t b = 0; b < estimates.size(); ++b) {
    const auto& e = estimates[b];
    if (e.n_crossings < min_crossings) {
      continue;
    }
    const double z = std::abs(e.value - reference[b]) / e.std_error;
    ++out.tested;
    out.within += z <= n_sigma;
    out.max_abs_z = std::max(out.max_abs_z, z);
  }
  return out;
}

BinComparison compare_histogram(const DensityHistogram& h, const std::vector<double>& probability,
                                double n_sigma) {
  if (h.counts.size() != probability.size()) {
    throw ValidationError("histogram comparison: bin count mismatch");
  }
  BinComparison out;
  const double n = static_cast<double>(h.in_range);
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double expected = n * probability[b];
    const double sd = std::sqrt(n * probability[b] * (1.0 - probability[b]));
    const double diff = std::abs(static_cast<double>(h.counts[b]) - expected);
    // A bin with zero expected mass passes only if it is empty.
    const double z = sd > 0 ? diff / sd : (diff == 0 ? 0.0 : HUGE_VAL);
    ++out.tested;
    out.within += z <= n_sigma;
    out.max_abs_z = std::max(out.max_abs_z, z);
  }
  return out;
}

std::vector<double> classical_bin_probabilities(const PacketParams& params, const Bins& bins,
                                                double t) {
  const double w = classical::width(params, t);
  const double c = params.u * t;
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - c) / (w * std::sqrt(2.0))); };
  std::vector<double> out(bins.count);
  const double mass = cdf(bins.hi) - cdf(bins.lo);
  for (std::size_t b = 0; b < bins.count; ++b) {
    const double hi = b + 1 == bins.count ? bins.hi : bins.edge(b + 1);
    out[b] = (cdf(hi) - cdf(bins.edge(b))) / mass;
  }
  return out;
}

} // namespace qarrival::mc
