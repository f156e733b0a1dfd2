#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace runup {

// Uniformly sampled real signal: sample i sits at t0 + i*dt.
// Also used for spatial profiles, with t0/dt read as x0/dx.
class TimeSeries {
 public:
  // Throws ValidationError unless dt > 0, t0 finite and values.size() >= 2.
  TimeSeries(double t0, double dt, std::vector<double> values);

  // n samples of zero.
  static TimeSeries zeros(double t0, double dt, std::size_t n);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return values_.size(); }
  double time(std::size_t i) const noexcept { return t0_ + static_cast<double>(i) * dt_; }
  double end_time() const noexcept { return time(size() - 1); }

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }

  // First `count` samples (count >= 2).
  TimeSeries head(std::size_t count) const;
  double max_abs() const noexcept;

 private:
  double t0_;
  double dt_;
  std::vector<double> values_;
};

// start, start + step, ..., count samples.
struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;
  double at(std::size_t i) const noexcept { return start + static_cast<double>(i) * step; }
};

// sqrt(sum (a-b)^2 / sum b^2) over the first `count` samples (all if 0).
// Returns the absolute L2 difference when the reference is identically zero.
double relative_l2(std::span<const double> a, std::span<const double> reference,
                   std::size_t count = 0);

}  // namespace runup
