#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "runup/time_series.hpp"

namespace runup {

using cplx = std::complex<double>;

// J0 or J1 of the first kind. Throws std::domain_error for x < 0, non-finite x
// or any other order.
double bessel_j(int order, double x);

// First `count` positive zeros of J0, strictly increasing.
std::vector<double> bessel_j0_roots(std::size_t count);

// Samples of a Laplace-domain function on the vertical line Re s = a.
struct ComplexSamples {
  std::vector<cplx> s_values;
  std::vector<cplx> F_values;
};

// Trapezoid approximation of \int_0^T f(t) e^{-st} dt at every s.
// Requires f.t0() == 0 and all s sharing one real part.
ComplexSamples laplace_forward(const TimeSeries& f, std::span<const cplx> s_grid);

// The closed Bromwich grid a + 2*pi*i*m/window for m = -n/2 .. n/2 (n+1 points).
std::vector<cplx> bromwich_grid(double a, double window, std::size_t n);

struct InverseLaplaceReport {
  double imag_residue = 0.0;  // max|Im f| / max|Re f| before the real part is taken
};

// Bromwich sum (e^{at}/T) * sum_m F(a + i w_m) e^{i w_m t} evaluated by one
// inverse FFT at t_k = k*window/n, k < n. The two Nyquist terms m = -n/2 and
// m = n/2 share the slot half and half. n must be a power of two. Throws
// NumericalError when the imaginary residue exceeds 1e-8.
TimeSeries inverse_laplace_ifft(const std::function<cplx(cplx)>& F, double a, double window,
                                std::size_t n, InverseLaplaceReport* report = nullptr);

// Same, from samples already taken on bromwich_grid(a, window, n).
TimeSeries inverse_laplace_ifft(const ComplexSamples& samples, double window,
                                InverseLaplaceReport* report = nullptr);

// Trapezoid causal convolution dt * sum_{j<=k} f_j g_{k-j} with half weights on
// the two end terms. Both series must start at 0 with equal steps; the result
// has the length of the shorter input.
TimeSeries convolve_causal(const TimeSeries& f, const TimeSeries& g);

enum class ConvolutionMethod { direct, fft, recursive };

// Convolution of a sampled signal with the kernel e^{i w t}:
//   C(t_k) = \int_0^{t_k} e^{i w (t_k - s)} f(s) ds.
// f is represented on every cell by its linear interpolant plus a quadratic
// bubble whose curvature is a causal extrapolation of second differences, and
// the kernel is integrated exactly against it. This keeps the result accurate
// when w*dt is large. The signal is taken as zero before its first sample.
class ExponentialConvolver {
 public:
  ExponentialConvolver(std::span<const double> f, double dt);

  std::size_t size() const noexcept { return f_.size(); }

  // Writes C_0..C_{n-1} into out (out.size() == size()).
  void apply(double omega, ConvolutionMethod method, std::span<cplx> out) const;

 private:
  void cell_terms(double omega, std::vector<cplx>& g) const;

  std::vector<double> f_;
  std::vector<double> curvature_;  // per cell
  double dt_;
};

// Moments \int_0^1 (1-y) e^{i th y}, \int_0^1 y e^{i th y}, \int_0^1 y(1-y) e^{i th y}.
struct CellMoments {
  cplx p0, p1, q;
};
CellMoments cell_moments(double theta);

struct LeastSquaresOptions {
  double xtol = 1e-12;
  double ftol = 1e-14;
  double gtol = 1e-14;
  int max_evaluations = 4000;
};

struct FitResult {
  std::vector<double> parameters;
  double residual_norm = 0.0;  // sqrt(sum r_i^2) at `parameters`
  int iterations = 0;
  bool converged = false;
};

using ResidualFunction = std::function<std::vector<double>(const std::vector<double>&)>;

// Levenberg-Marquardt (MINPACK lmdif) with a central-difference Jacobian.
// Never throws on non-convergence; check `converged`.
FitResult least_squares(const ResidualFunction& residual, std::vector<double> initial_guess,
                        const LeastSquaresOptions& options = {});

// First derivative on a uniform grid. order 2: central differences with
// second-order one-sided ends (3 samples minimum). order 4: five-point
// stencils, shifted inward near the ends (5 samples minimum).
std::vector<double> gradient(std::span<const double> y, double h, int order = 2);

// Piecewise cubic Hermite interpolant through (x_i, y_i), x strictly
// increasing, evaluated at xq. Node slopes are derivatives of the local
// five-point interpolating polynomial (fourth order). Cells whose neighbouring
// secants do not change sign are held to the Fritsch-Carlson monotone region
// and flat cells stay flat, so monotone data gives a monotone interpolant.
// Cells next to a strict data extremum keep their slopes. Queries outside
// [x_0, x_last] are clamped.
std::vector<double> pchip(std::span<const double> x, std::span<const double> y,
                          std::span<const double> xq);

std::size_t next_pow2(std::size_t n);

// Ordinary least-squares slope and intercept of y against x.
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace runup
