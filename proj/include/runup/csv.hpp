#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "runup/time_series.hpp"

namespace runup {

// Writes "abscissa,value[,exact]" rows with 17 significant digits.
void write_series_csv(const std::filesystem::path& path, const std::string& abscissa_name,
                      const std::string& value_name, const TimeSeries& values,
                      const TimeSeries* exact = nullptr, const std::string& exact_name = "exact");

// Arbitrary columns of equal length under a header row.
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);

// Reads column `column` (0 is the abscissa) of a CSV with a header row. The
// abscissa must be uniform to 1e-6 relative; otherwise ValidationError.
TimeSeries read_series_csv(const std::filesystem::path& path, std::size_t column = 1);

}  // namespace runup
