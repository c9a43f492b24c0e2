#pragma once

#include <qarrival/sweep.hpp>

#include <iosfwd>
#include <string>
#include <string_view>

namespace qarrival::io {

inline constexpr std::string_view kCsvHeader = "axis,axis_value,grid,grid_value,quantity,value,error";

/// %.17g, enough to round-trip any double.
std::string format_double(double v);

/// Writes header plus one line per row. Failed cells leave `value` empty and
/// carry "failed: <reason>" in the error column.
void write_csv(std::ostream& os, const sweep::SweepResult& result);

struct CsvRecord {
  std::string axis;
  double axis_value = 0.0;
  std::string grid;
  std::string grid_value;
  std::string quantity;
  std::string value;
  std::string error;
};

/// Minimal reader for files produced by write_csv.
std::vector<CsvRecord> read_csv(std::istream& is);

} // namespace qarrival::io
