#pragma once

#include <qarrival/units.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qarrival::sweep {

enum class Axis { MassAmu, X, C, Time };
enum class Quantity { RhoQ, RhoC, JQ, JC, TauQ, TauC, Wigner };
enum class GridVariable { X, T };

std::string_view name(Axis a);
std::string_view name(Quantity q);
std::string_view name(GridVariable g);
std::optional<Axis> parse_axis(std::string_view s);
std::optional<Quantity> parse_quantity(std::string_view s);
std::optional<GridVariable> parse_grid_variable(std::string_view s);

/// Scalar quantities (tau_*) take no grid.
bool is_scalar(Quantity q);

/// Uniform sampling of x (at the evaluation time) or of t (at the detector).
struct Grid {
  GridVariable variable = GridVariable::X;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 2;

  std::vector<double> points() const;
  bool operator==(const Grid&) const = default;
};

struct SweepSpec {
  PacketParams base;
  DetectorConfig det;
  double t = 0.0; ///< evaluation time for x grids, s
  Axis axis = Axis::MassAmu;
  std::vector<double> values;
  std::vector<Quantity> outputs;
  Grid grid;

  bool operator==(const SweepSpec&) const = default;
};

/// One cell of the result. `value` is empty and `failure` set for per-point
/// numerical failures; `std_error` is reserved for stochastic quantities.
struct Row {
  double axis_value = 0.0;
  std::optional<double> grid_value;
  Quantity quantity = Quantity::RhoQ;
  std::optional<double> value;
  std::optional<double> std_error;
  std::string failure;

  bool failed() const { return !value.has_value(); }
};

struct SweepResult {
  std::vector<Row> rows;
  SweepSpec spec;
  std::string code_version;
};

/// Throws ValidationError for an unusable spec (empty or non-monotone values,
/// grid with < 2 points, invalid physical parameters at any axis value, ...).
void validate(const SweepSpec& spec);

PacketParams params_at(const SweepSpec& spec, double axis_value);
DetectorConfig detector_at(const SweepSpec& spec, double axis_value);
double time_at(const SweepSpec& spec, double axis_value);

/// Number of cells the spec requests (= rows produced, error rows included).
std::size_t expected_rows(const SweepSpec& spec);

/// Evaluates every requested cell. Rows are sorted by axis value, then grid
/// point, then quantity order as requested.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);

} // namespace qarrival::sweep
