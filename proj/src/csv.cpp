#include "runup/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "runup/error.hpp"

namespace runup {

void write_series_csv(const std::filesystem::path& path, const std::string& abscissa_name,
                      const std::string& value_name, const TimeSeries& values,
                      const TimeSeries* exact, const std::string& exact_name) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << abscissa_name << ',' << value_name;
  if (exact != nullptr) out << ',' << exact_name;
  out << '\n';
  char buf[128];
  for (std::size_t i = 0; i < values.size(); ++i) {
    int n = std::snprintf(buf, sizeof buf, "%.17g,%.17g", values.time(i), values[i]);
    out.write(buf, n);
    if (exact != nullptr) {
      const double e = i < exact->size() ? (*exact)[i] : NAN;
      n = std::snprintf(buf, sizeof buf, ",%.17g", e);
      out.write(buf, n);
    }
    out << '\n';
  }
  if (!out) throw ValidationError("write failed for " + path.string());
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size() || columns.empty()) {
    throw ValidationError("write_table_csv: header and column counts differ");
  }
  for (const auto& c : columns) {
    if (c.size() != columns.front().size()) throw ValidationError("write_table_csv: ragged columns");
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < columns.front().size(); ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      const int n = std::snprintf(buf, sizeof buf, k ? ",%.17g" : "%.17g", columns[k][i]);
      out.write(buf, n);
    }
    out << '\n';
  }
  if (!out) throw ValidationError("write failed for " + path.string());
}

TimeSeries read_series_csv(const std::filesystem::path& path, std::size_t column) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty file");
  std::vector<double> t, v;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) {
      try {
        cells.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError(path.string() + ":" + std::to_string(row) + ": not a number: '" + cell + "'");
      }
    }
    if (cells.size() <= column) {
      throw ValidationError(path.string() + ":" + std::to_string(row) + ": missing column " +
                            std::to_string(column));
    }
    t.push_back(cells[0]);
    v.push_back(cells[column]);
  }
  if (t.size() < 2) throw ValidationError(path.string() + ": need at least 2 rows");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::abs(t[i] - (t.front() + dt * static_cast<double>(i))) > 1e-6 * std::abs(dt)) {
      throw ValidationError(path.string() + ": abscissa is not uniformly spaced (row " +
                            std::to_string(i + 2) + ")");
    }
  }
  return TimeSeries(t.front(), dt, std::move(v));
}

}  // namespace runup
