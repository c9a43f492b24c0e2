#include <qarrival/csv.hpp>
#include <qarrival/errors.hpp>

#include <cstdio>
#include <istream>
#include <ostream>

namespace qarrival::io {
namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const sweep::SweepResult& result) {
  os << kCsvHeader << '\n';
  const auto axis = std::string(sweep::name(result.spec.axis));
  const auto grid = std::string(sweep::name(result.spec.grid.variable));
  for (const auto& row : result.rows) {
    os << axis << ',' << format_double(row.axis_value) << ',';
    if (row.grid_value) {
      os << grid << ',' << format_double(*row.grid_value);
    } else {
      os << ',';
    }
    os << ',' << sweep::name(row.quantity) << ',';
    if (row.value) {
      os << format_double(*row.value);
    }
    os << ',';
    if (row.failed()) {
      os << quote("failed: " + row.failure);
    } else if (row.std_error) {
      os << format_double(*row.std_error);
    }
    os << '\n';
  }
}

std::vector<CsvRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw ValidationError("CSV header does not match: expected '" + std::string(kCsvHeader) + "'");
  }
  std::vector<CsvRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    auto f = split_line(line);
    if (f.size() != 7) {
      throw ValidationError("CSV line has " + std::to_string(f.size()) + " fields: " + line);
    }
    out.push_back({f[0], std::stod(f[1]), f[2], f[3], f[4], f[5], f[6]});
  }
  return out;
}

} // namespace qarrival::io
