#include "runup/numerics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <iterator>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "runup/error.hpp"

namespace runup {

namespace {

constexpr double kPi = std::numbers::pi;

// In-place unnormalized DFT. sign = FFTW_FORWARD or FFTW_BACKWARD.
// FFTW_ESTIMATE keeps the plan, and so the rounding, identical between runs.
void fft_inplace(std::vector<cplx>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
  if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

double bessel_j(int order, double x) {
  if (order != 0 && order != 1) {
    throw std::domain_error("bessel_j supports orders 0 and 1, got " + std::to_string(order));
  }
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("bessel_j needs finite x >= 0");
  }
  return boost::math::cyl_bessel_j(order, x);
}

std::vector<double> bessel_j0_roots(std::size_t count) {
  if (count == 0) throw ValidationError("bessel_j0_roots needs count >= 1");
  std::vector<double> roots;
  roots.reserve(count);
  boost::math::cyl_bessel_j_zero(0.0, 1, static_cast<unsigned>(count), std::back_inserter(roots));
  return roots;
}

ComplexSamples laplace_forward(const TimeSeries& f, std::span<const cplx> s_grid) {
  if (f.t0() != 0.0) throw ValidationError("laplace_forward needs a series starting at t = 0");
  if (!s_grid.empty()) {
    const double a = s_grid.front().real();
    for (const cplx& s : s_grid) {
      if (std::abs(s.real() - a) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw ValidationError("laplace_forward: abscissae are not on one vertical line");
      }
    }
  }
  const std::size_t n = f.size();
  const double h = f.dt();
  ComplexSamples out;
  out.s_values.assign(s_grid.begin(), s_grid.end());
  out.F_values.resize(s_grid.size());
  // e^{-s t_j} by recurrence, re-anchored every 128 steps to stop drift.
  constexpr std::size_t kAnchor = 128;
  for (std::size_t m = 0; m < s_grid.size(); ++m) {
    const cplx s = s_grid[m];
    const cplx step = std::exp(-s * h);
    cplx e = 1.0;
    cplx acc = 0.5 * f[0];
    for (std::size_t j = 1; j < n; ++j) {
      e = (j % kAnchor == 0) ? std::exp(-s * (h * static_cast<double>(j))) : e * step;
      const double w = (j + 1 == n) ? 0.5 : 1.0;
      acc += w * f[j] * e;
    }
    out.F_values[m] = acc * h;
  }
  return out;
}

std::vector<cplx> bromwich_grid(double a, double window, std::size_t n) {
  if (!(window > 0.0)) throw ValidationError("Bromwich window must be positive");
  if (!is_pow2(n)) throw ValidationError("Bromwich sample count must be a power of two");
  std::vector<cplx> s(n + 1);
  const long half = static_cast<long>(n / 2);
  for (long m = -half; m <= half; ++m) {
    s[static_cast<std::size_t>(m + half)] = cplx(a, 2.0 * kPi * static_cast<double>(m) / window);
  }
  return s;
}

TimeSeries inverse_laplace_ifft(const ComplexSamples& samples, double window,
                                InverseLaplaceReport* report) {
  const std::size_t count = samples.s_values.size();
  if (count < 3 || samples.F_values.size() != count) {
    throw ValidationError("inverse_laplace_ifft: malformed sample set");
  }
  const std::size_t n = count - 1;
  if (!is_pow2(n)) throw ValidationError("inverse_laplace_ifft: N must be a power of two");
  const double a = samples.s_values.front().real();
  const long half = static_cast<long>(n / 2);
  const double dw = 2.0 * kPi / window;
  for (std::size_t i = 0; i < count; ++i) {
    const cplx expected(a, dw * static_cast<double>(static_cast<long>(i) - half));
    if (std::abs(samples.s_values[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw ValidationError("inverse_laplace_ifft: samples are not on the Bromwich grid");
    }
  }

  std::vector<cplx> x(n);
  for (long m = -half + 1; m < half; ++m) {
    x[static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n))] =
        samples.F_values[static_cast<std::size_t>(m + half)];
  }
  x[n / 2] = 0.5 * (samples.F_values.front() + samples.F_values.back());
  fft_inplace(x, FFTW_BACKWARD);

  const double dt = window / static_cast<double>(n);
  std::vector<double> values(n);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx v = x[k] * (std::exp(a * dt * static_cast<double>(k)) / window);
    values[k] = v.real();
    max_re = std::max(max_re, std::abs(v.real()));
    max_im = std::max(max_im, std::abs(v.imag()));
  }
  const double residue = max_re > 0.0 ? max_im / max_re : (max_im > 0.0 ? 1.0 : 0.0);
  if (report != nullptr) report->imag_residue = residue;
  if (residue > 1e-8) {
    throw NumericalError("inverse Laplace transform left an imaginary residue of " +
                         std::to_string(residue) +
                         " (a singularity right of the Bromwich line, or aliasing)");
  }
  return TimeSeries(0.0, dt, std::move(values));
}

TimeSeries inverse_laplace_ifft(const std::function<cplx(cplx)>& F, double a, double window,
                                std::size_t n, InverseLaplaceReport* report) {
  ComplexSamples samples;
  samples.s_values = bromwich_grid(a, window, n);
  samples.F_values.reserve(samples.s_values.size());
  for (const cplx& s : samples.s_values) samples.F_values.push_back(F(s));
  return inverse_laplace_ifft(samples, window, report);
}

TimeSeries convolve_causal(const TimeSeries& f, const TimeSeries& g) {
  if (std::abs(f.dt() - g.dt()) > 1e-12 * f.dt()) {
    throw ValidationError("convolve_causal: series have different steps");
  }
  if (f.t0() != 0.0 || g.t0() != 0.0) {
    throw ValidationError("convolve_causal: both series must start at t = 0");
  }
  const std::size_t n = std::min(f.size(), g.size());
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.5 * (f[0] * g[k] + f[k] * g[0]);
    for (std::size_t j = 1; j < k; ++j) acc += f[j] * g[k - j];
    out[k] = acc * f.dt();
  }
  return TimeSeries(0.0, f.dt(), std::move(out));
}

CellMoments cell_moments(double theta) {
  if (std::abs(theta) < 0.5) {
    // \int_0^1 y^p e^{i th y} = sum_k (i th)^k / (k! (p+k+1))
    cplx m0 = 0.0, m1 = 0.0, m2 = 0.0;
    cplx term = 1.0;  // (i th)^k / k!
    for (int k = 0; k < 40; ++k) {
      m0 += term / static_cast<double>(k + 1);
      m1 += term / static_cast<double>(k + 2);
      m2 += term / static_cast<double>(k + 3);
      term *= cplx(0.0, theta) / static_cast<double>(k + 1);
      if (std::abs(term) < 1e-18) break;
    }
    return {m0 - m1, m1, m1 - m2};
  }
  const cplx it(0.0, theta);
  const cplx e = std::exp(it);
  const cplx m0 = (e - 1.0) / it;
  const cplx m1 = e / it - m0 / it;
  const cplx m2 = e / it - 2.0 * m1 / it;
  return {m0 - m1, m1, m1 - m2};
}

ExponentialConvolver::ExponentialConvolver(std::span<const double> f, double dt)
    : f_(f.begin(), f.end()), dt_(dt) {
  if (f_.size() < 2) throw ValidationError("ExponentialConvolver needs at least 2 samples");
  if (!(dt > 0.0)) throw ValidationError("ExponentialConvolver needs dt > 0");
  const std::size_t n = f_.size();
  auto at = [&](long i) { return i < 0 ? 0.0 : f_[static_cast<std::size_t>(i)]; };
  auto d2 = [&](long i) { return (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (dt * dt); };
  curvature_.resize(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const long jj = static_cast<long>(j);
    curvature_[j] = 1.5 * d2(jj) - 0.5 * d2(jj - 1);
  }
}

void ExponentialConvolver::cell_terms(double omega, std::vector<cplx>& g) const {
  const CellMoments mom = cell_moments(omega * dt_);
  const double bubble = 0.5 * dt_ * dt_;
  g.resize(f_.size() - 1);
  for (std::size_t j = 0; j + 1 < f_.size(); ++j) {
    g[j] = f_[j] * mom.p1 + f_[j + 1] * mom.p0 - bubble * curvature_[j] * mom.q;
  }
}

void ExponentialConvolver::apply(double omega, ConvolutionMethod method,
                                 std::span<cplx> out) const {
  const std::size_t n = f_.size();
  if (out.size() != n) throw ValidationError("ExponentialConvolver: output size mismatch");
  std::vector<cplx> g;
  cell_terms(omega, g);
  const double theta = omega * dt_;
  out[0] = 0.0;

  switch (method) {
    case ConvolutionMethod::recursive: {
      const cplx z = std::polar(1.0, theta);
      for (std::size_t k = 1; k < n; ++k) out[k] = z * out[k - 1] + dt_ * g[k - 1];
      return;
    }
    case ConvolutionMethod::direct: {
      // C_k = dt sum_{j<k} z^{k-1-j} g_j. The kernel is stored reversed so the
      // inner loop walks both arrays forward.
      const std::size_t m = n - 1;
      std::vector<double> kr(m), ki(m), gr(m), gi(m);
      for (std::size_t p = 0; p < m; ++p) {
        const double ang = theta * static_cast<double>(m - 1 - p);
        kr[p] = std::cos(ang);
        ki[p] = std::sin(ang);
        gr[p] = g[p].real();
        gi[p] = g[p].imag();
      }
      for (std::size_t k = 1; k < n; ++k) {
        const double* a_r = kr.data() + (m - k);
        const double* a_i = ki.data() + (m - k);
        double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
        for (std::size_t j = 0; j < k; ++j) {
          re += a_r[j] * gr[j] - a_i[j] * gi[j];
          im += a_r[j] * gi[j] + a_i[j] * gr[j];
        }
        out[k] = cplx(re, im) * dt_;
      }
      return;
    }
    case ConvolutionMethod::fft: {
      const std::size_t m = n - 1;
      const std::size_t size = next_pow2(2 * m);
      std::vector<cplx> a(size, 0.0), b(size, 0.0);
      for (std::size_t p = 0; p < m; ++p) {
        a[p] = g[p];
        b[p] = std::polar(1.0, theta * static_cast<double>(p));
      }
      fft_inplace(a, FFTW_FORWARD);
      fft_inplace(b, FFTW_FORWARD);
      for (std::size_t p = 0; p < size; ++p) a[p] *= b[p];
      fft_inplace(a, FFTW_BACKWARD);
      const double scale = dt_ / static_cast<double>(size);
      for (std::size_t k = 1; k < n; ++k) out[k] = a[k - 1] * scale;
      return;
    }
  }
}

namespace {

struct ResidualFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const ResidualFunction* fn;
  int n_inputs;
  int n_values;

  int inputs() const { return n_inputs; }
  int values() const { return n_values; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    const std::vector<double> p(x.data(), x.data() + x.size());
    const std::vector<double> r = (*fn)(p);
    if (static_cast<int>(r.size()) != n_values) {
      throw ValidationError("least_squares: residual length changed between calls");
    }
    for (int i = 0; i < n_values; ++i) fvec[i] = r[static_cast<std::size_t>(i)];
    return 0;
  }
};

}  // namespace

FitResult least_squares(const ResidualFunction& residual, std::vector<double> initial_guess,
                        const LeastSquaresOptions& options) {
  if (initial_guess.empty()) throw ValidationError("least_squares: empty parameter vector");
  const std::vector<double> r0 = residual(initial_guess);
  if (r0.size() < initial_guess.size()) {
    throw ValidationError("least_squares: fewer residuals than parameters");
  }
  ResidualFunctor functor{&residual, static_cast<int>(initial_guess.size()),
                          static_cast<int>(r0.size())};
  Eigen::NumericalDiff<ResidualFunctor, Eigen::Central> numdiff(functor);
  Eigen::LevenbergMarquardt<decltype(numdiff)> lm(numdiff);
  lm.parameters.xtol = options.xtol;
  lm.parameters.ftol = options.ftol;
  lm.parameters.gtol = options.gtol;
  lm.parameters.maxfev = options.max_evaluations;

  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(initial_guess.data(),
                                                  static_cast<Eigen::Index>(initial_guess.size()));
  const auto status = lm.minimize(x);

  FitResult out;
  out.parameters.assign(x.data(), x.data() + x.size());
  double ss = 0.0;
  for (double r : residual(out.parameters)) ss += r * r;
  out.residual_norm = std::sqrt(ss);
  out.iterations = static_cast<int>(lm.iter);
  using namespace Eigen::LevenbergMarquardtSpace;
  switch (status) {
    case RelativeReductionTooSmall:
    case RelativeErrorTooSmall:
    case RelativeErrorAndReductionTooSmall:
    case CosinusTooSmall:
    // tolerances below machine precision: no further progress is possible
    case FtolTooSmall:
    case XtolTooSmall:
    case GtolTooSmall:
      out.converged = true;
      break;
    default:
      out.converged = false;
  }
  return out;
}

namespace {

// Derivative at x[i] of the polynomial through the `width` nodes nearest to i.
double lagrange_slope(std::span<const double> x, std::span<const double> y, std::size_t i,
                      std::size_t width) {
  const std::size_t n = x.size();
  const std::size_t s = std::min(i >= width / 2 ? i - width / 2 : 0, n - width);
  double d = 0.0;
  for (std::size_t k = s; k < s + width; ++k) {
    double w;
    if (k == i) {
      w = 0.0;
      for (std::size_t m = s; m < s + width; ++m) {
        if (m != i) w += 1.0 / (x[i] - x[m]);
      }
    } else {
      double num = 1.0, den = 1.0;
      for (std::size_t m = s; m < s + width; ++m) {
        if (m == k) continue;
        den *= x[k] - x[m];
        if (m != i) num *= x[i] - x[m];
      }
      w = num / den;
    }
    d += w * y[k];
  }
  return d;
}

}  // namespace

std::vector<double> gradient(std::span<const double> y, double h, int order) {
  const std::size_t n = y.size();
  if (order != 2 && order != 4) throw ValidationError("gradient: order must be 2 or 4");
  if (n < (order == 2 ? 3u : 5u)) throw ValidationError("gradient: too few samples for the order");
  std::vector<double> d(n);
  if (order == 4) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = h * static_cast<double>(i);
    for (std::size_t i = 0; i < n; ++i) d[i] = lagrange_slope(x, y, i, 5);
    return d;
  }
  d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> pchip(std::span<const double> x, std::span<const double> y,
                          std::span<const double> xq) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ValidationError("pchip: need >= 2 matching nodes");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) throw ValidationError("pchip: abscissae not strictly increasing");
  }
  std::vector<double> h(n - 1), m(n - 1), d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    m[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = m[0];
  } else {
    const std::size_t width = n >= 5 ? 5 : 3;
    for (std::size_t i = 0; i < n; ++i) d[i] = lagrange_slope(x, y, i, width);
    // Fritsch-Carlson conditions on every cell that does not touch a data
    // extremum; flat cells get flat ends.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (m[i] == 0.0) {
        d[i] = d[i + 1] = 0.0;
        continue;
      }
      const bool run = (i == 0 || m[i - 1] * m[i] >= 0.0) && (i + 2 == n || m[i + 1] * m[i] >= 0.0);
      if (!run) continue;
      double alpha = d[i] / m[i], beta = d[i + 1] / m[i];
      if (alpha < 0.0) d[i] = alpha = 0.0;
      if (beta < 0.0) d[i + 1] = beta = 0.0;
      const double r2 = alpha * alpha + beta * beta;
      if (r2 > 9.0) {
        const double t = 3.0 / std::sqrt(r2);
        d[i] = t * alpha * m[i];
        d[i + 1] = t * beta * m[i];
      }
    }
  }

  std::vector<double> out(xq.size());
  for (std::size_t q = 0; q < xq.size(); ++q) {
    const double xv = std::clamp(xq[q], x[0], x[n - 1]);
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), xv) - x.begin());
    i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
    const double t = (xv - x[i]) / h[i];
    const double t2 = t * t, t3 = t2 * t;
    out[q] = (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h[i] * d[i] +
             (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h[i] * d[i + 1];
  }
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ValidationError("linear_fit: need >= 2 matching points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ValidationError("linear_fit: abscissae are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace runup
