#include "runup/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "runup/error.hpp"

namespace runup {

TimeSeries::TimeSeries(double t0, double dt, std::vector<double> values)
    : t0_(t0), dt_(dt), values_(std::move(values)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw ValidationError("time series step must be positive and finite, got " +
                          std::to_string(dt_));
  }
  if (!std::isfinite(t0_)) throw ValidationError("time series origin is not finite");
  if (values_.size() < 2) {
    throw ValidationError("time series needs at least 2 samples, got " +
                          std::to_string(values_.size()));
  }
}

TimeSeries TimeSeries::zeros(double t0, double dt, std::size_t n) {
  return TimeSeries(t0, dt, std::vector<double>(n, 0.0));
}

TimeSeries TimeSeries::head(std::size_t count) const {
  count = std::min(count, size());
  return TimeSeries(t0_, dt_, std::vector<double>(values_.begin(), values_.begin() + count));
}

double TimeSeries::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double relative_l2(std::span<const double> a, std::span<const double> reference,
                   std::size_t count) {
  std::size_t n = std::min(a.size(), reference.size());
  if (count > 0) n = std::min(n, count);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - reference[i];
    num += d * d;
    den += reference[i] * reference[i];
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace runup
