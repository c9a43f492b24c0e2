#include <qarrival/arrival.hpp>
#include <qarrival/classical.hpp>
#include <qarrival/errors.hpp>
#include <qarrival/parallel.hpp>
#include <qarrival/quantum.hpp>
#include <qarrival/sweep.hpp>
#include <qarrival/version.hpp>
#include <qarrival/wigner.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace qarrival::sweep {
namespace {

constexpr std::array<std::pair<Axis, std::string_view>, 4> kAxes{{
    {Axis::MassAmu, "mass_amu"},
    {Axis::X, "X"},
    {Axis::C, "C"},
    {Axis::Time, "t"},
}};

constexpr std::array<std::pair<Quantity, std::string_view>, 7> kQuantities{{
    {Quantity::RhoQ, "rho_q"},
    {Quantity::RhoC, "rho_c"},
    {Quantity::JQ, "j_q"},
    {Quantity::JC, "j_c"},
    {Quantity::TauQ, "tau_q"},
    {Quantity::TauC, "tau_c"},
    {Quantity::Wigner, "wigner"},
}};

constexpr std::array<std::pair<GridVariable, std::string_view>, 2> kGridVars{{
    {GridVariable::X, "x"},
    {GridVariable::T, "t"},
}};

template <class E, std::size_t N>
std::string_view lookup(const std::array<std::pair<E, std::string_view>, N>& table, E e) {
  for (const auto& [k, v] : table) {
    if (k == e) {
      return v;
    }
  }
  return "?";
}

template <class E, std::size_t N>
std::optional<E> reverse(const std::array<std::pair<E, std::string_view>, N>& table,
                         std::string_view s) {
  for (const auto& [k, v] : table) {
    if (v == s) {
      return k;
    }
  }
  return std::nullopt;
}

double grid_quantity(Quantity q, const PacketParams& params, double x, double t) {
  switch (q) {
  case Quantity::RhoQ:
    return quantum::rho(params, x, t);
  case Quantity::RhoC:
    return classical::rho(params, x, t);
  case Quantity::JQ:
    return quantum::current(params, x, t);
  case Quantity::JC:
    return classical::current(params, x, t);
  case Quantity::Wigner:
    return wigner::closed(params, x, params.p_bar(), t);
  default:
    break;
  }
  throw ValidationError("not a grid quantity: " + std::string(name(q)));
}

} // namespace

std::string_view name(Axis a) { return lookup(kAxes, a); }
std::string_view name(Quantity q) { return lookup(kQuantities, q); }
std::string_view name(GridVariable g) { return lookup(kGridVars, g); }
std::optional<Axis> parse_axis(std::string_view s) { return reverse(kAxes, s); }
std::optional<Quantity> parse_quantity(std::string_view s) { return reverse(kQuantities, s); }
std::optional<GridVariable> parse_grid_variable(std::string_view s) {
  return reverse(kGridVars, s);
}

bool is_scalar(Quantity q) { return q == Quantity::TauQ || q == Quantity::TauC; }

std::vector<double> Grid::points() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  if (count > 0) {
    out.back() = max;
  }
  return out;
}

PacketParams params_at(const SweepSpec& spec, double v) {
  PacketParams p = spec.base;
  switch (spec.axis) {
  case Axis::MassAmu:
    if (!(v > 0)) {
      std::ostringstream msg;
      msg << "mass_amu = " << v << ": must be finite and > 0";
      throw ValidationError(msg.str());
    }
    p.mass = v * kAmuGrams;
    break;
  case Axis::C:
    p.C = v;
    break;
  default:
    break;
  }
  validate(p);
  return p;
}

DetectorConfig detector_at(const SweepSpec& spec, double v) {
  DetectorConfig d = spec.det;
  if (spec.axis == Axis::X) {
    d.X = v;
  }
  return d;
}

double time_at(const SweepSpec& spec, double v) { return spec.axis == Axis::Time ? v : spec.t; }

void validate(const SweepSpec& spec) {
  validate(spec.base);
  if (spec.values.empty()) {
    throw ValidationError("sweep values must be non-empty");
  }
  const bool up = spec.values.size() < 2 || spec.values[1] > spec.values[0];
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (up ? !(spec.values[i] > spec.values[i - 1]) : !(spec.values[i] < spec.values[i - 1])) {
      throw ValidationError("sweep values must be strictly monotone");
    }
  }
  if (spec.outputs.empty()) {
    throw ValidationError("sweep outputs must be non-empty");
  }
  for (std::size_t i = 0; i < spec.outputs.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.outputs.size(); ++j) {
      if (spec.outputs[i] == spec.outputs[j]) {
        throw ValidationError("duplicate sweep output: " + std::string(name(spec.outputs[i])));
      }
    }
  }
  const bool any_grid = std::any_of(spec.outputs.begin(), spec.outputs.end(),
                                    [](Quantity q) { return !is_scalar(q); });
  if (any_grid) {
    if (spec.grid.count < 2) {
      throw ValidationError("grid count must be >= 2");
    }
    if (!std::isfinite(spec.grid.min) || !std::isfinite(spec.grid.max) ||
        !(spec.grid.max > spec.grid.min)) {
      throw ValidationError("grid needs finite min < max");
    }
    if (spec.grid.variable == GridVariable::T && spec.grid.min < 0) {
      throw ValidationError("time grid must start at t >= 0");
    }
    if (spec.grid.variable == GridVariable::T && spec.axis == Axis::Time) {
      throw ValidationError("axis t cannot be combined with a time grid");
    }
  }
  for (double v : spec.values) {
    const auto p = params_at(spec, v);
    const double t = time_at(spec, v);
    if (!std::isfinite(t) || t < 0) {
      std::ostringstream msg;
      msg << "t = " << t << ": must be finite and >= 0";
      throw ValidationError(msg.str());
    }
    const auto det = detector_at(spec, v);
    if (std::any_of(spec.outputs.begin(), spec.outputs.end(), is_scalar)) {
      validate(det, p);
    }
  }
}

std::size_t expected_rows(const SweepSpec& spec) {
  std::size_t per_value = 0;
  for (Quantity q : spec.outputs) {
    per_value += is_scalar(q) ? 1 : spec.grid.count;
  }
  return per_value * spec.values.size();
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  validate(spec);
  std::vector<std::vector<Row>> per_value(spec.values.size());
  const auto grid = spec.grid.points();

  parallel_for(
      spec.values.size(),
      [&](std::size_t i) {
        const double v = spec.values[i];
        const auto params = params_at(spec, v);
        const auto det = detector_at(spec, v);
        const double t_eval = time_at(spec, v);
        auto& rows = per_value[i];

        for (Quantity q : spec.outputs) {
          if (is_scalar(q)) {
            Row row{v, std::nullopt, q, std::nullopt, std::nullopt, {}};
            try {
              const arrival::CurrentFn fn =
                  q == Quantity::TauQ
                      ? arrival::CurrentFn([&](double x, double t) { return quantum::current(params, x, t); })
                      : arrival::CurrentFn([&](double x, double t) { return classical::current(params, x, t); });
              row.value = arrival::mean_arrival_time(fn, params, det).tau_bar;
            } catch (const NumericalError& e) {
              row.failure = e.what();
            }
            rows.push_back(std::move(row));
            continue;
          }
          for (double g : grid) {
            const double x = spec.grid.variable == GridVariable::X ? g : det.X;
            const double t = spec.grid.variable == GridVariable::X ? t_eval : g;
            Row row{v, g, q, std::nullopt, std::nullopt, {}};
            try {
              row.value = grid_quantity(q, params, x, t);
            } catch (const NumericalError& e) {
              row.failure = e.what();
            }
            rows.push_back(std::move(row));
          }
        }
      },
      threads);

  SweepResult result;
  result.spec = spec;
  result.code_version = std::string(kVersion);
  for (auto& rows : per_value) {
    for (auto& r : rows) {
      result.rows.push_back(std::move(r));
    }
  }
  auto quantity_rank = [&](Quantity q) {
    return std::find(spec.outputs.begin(), spec.outputs.end(), q) - spec.outputs.begin();
  };
  std::stable_sort(result.rows.begin(), result.rows.end(), [&](const Row& a, const Row& b) {
    if (a.axis_value != b.axis_value) {
      return a.axis_value < b.axis_value;
    }
    if (a.grid_value != b.grid_value) {
      return a.grid_value < b.grid_value; // scalars (no grid point) first
    }
    return quantity_rank(a.quantity) < quantity_rank(b.quantity);
  });
  return result;
}

} // namespace qarrival::sweep
