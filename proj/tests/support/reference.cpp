#include "reference.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ref {

namespace mp = boost::multiprecision;
using real = mp::cpp_bin_float_50;
using complex = mp::cpp_complex_50;

namespace {

const real kPi = boost::math::constants::pi<real>();

real series(int nu, const real& x) {
  const real q = -(x * x) / 4;
  real term = nu == 0 ? real(1) : x / 2;
  real sum = term;
  const real eps = std::numeric_limits<real>::epsilon();
  for (int k = 1; k < 400; ++k) {
    term *= q / (real(k) * real(k + nu));
    sum += term;
    if (abs(term) < eps * abs(sum) && k > 2) break;
  }
  return sum;
}

real hankel(int nu, const real& x) {
  const real mu = 4 * nu * nu;
  real p = 0, q = 0;
  real coef = 1;  // a_k(nu) / x^k
  real last = 1e300;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) coef *= (mu - real((2 * k - 1) * (2 * k - 1))) / (real(k) * 8 * x);
    const real mag = abs(coef);
    if (mag > last) break;
    last = mag;
    const int sign = (k / 2) % 2 == 0 ? 1 : -1;
    if (k % 2 == 0) p += sign * coef; else q += sign * coef;
    if (mag < std::numeric_limits<real>::epsilon()) break;
  }
  const real chi = x - (real(nu) / 2 + real(0.25)) * kPi;
  return sqrt(2 / (kPi * x)) * (p * cos(chi) - q * sin(chi));
}

real j(int nu, const real& x) { return x < 25 ? series(nu, x) : hankel(nu, x); }

const std::vector<real>& zeros_hp(std::size_t count) {
  static std::vector<real> z;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  for (std::size_t n = z.size() + 1; n <= count; ++n) {
    real lo = (real(n) - real(0.25)) * kPi, hi = (real(n) - real(0.125)) * kPi;
    real flo = j(0, lo);
    for (int it = 0; it < 80; ++it) {
      const real mid = (lo + hi) / 2;
      const real fm = j(0, mid);
      if ((fm < 0) == (flo < 0)) { lo = mid; flo = fm; } else { hi = mid; }
    }
    z.push_back((lo + hi) / 2);
  }
  return z;
}

}  // namespace

double bessel_j(int order, double x) {
  if (order != 0 && order != 1) throw std::domain_error("order");
  return static_cast<double>(j(order, real(x)));
}

const std::vector<double>& j0_zeros(std::size_t count) {
  static std::vector<double> out;
  static std::mutex m;
  const auto& hp = zeros_hp(count);
  std::lock_guard<std::mutex> lock(m);
  while (out.size() < count) out.push_back(static_cast<double>(hp[out.size()]));
  return out;
}

double b_coefficient(std::size_t n) {
  const real z = zeros_hp(n)[n - 1];
  return static_cast<double>(-2 / (z * j(1, z)));
}

std::complex<double> multiplier_denominator(double sigma_L, std::size_t modes,
                                            std::complex<double> s) {
  const auto& z = zeros_hp(modes);
  const complex sc(s.real(), s.imag());
  const complex s2 = sc * sc;
  complex sum = 0;
  for (std::size_t n = 0; n < modes; ++n) {
    const real a = z[n] * z[n] / (4 * real(sigma_L));
    const real b = -2 / (z[n] * j(1, z[n]));
    sum += complex(b) / (complex(a) + s2);
  }
  const complex den = 1 + s2 * sum;
  return {static_cast<double>(den.real()), static_cast<double>(den.imag())};
}

std::vector<double> mode_ode_rk4(double a, double b, const std::function<double(double)>& f,
                                 double h, std::size_t steps, std::size_t stride) {
  std::vector<double> out{0.0};
  double c = 0.0, v = 0.0, t = 0.0;
  auto acc = [&](double tt, double cc) { return b * f(tt) - a * cc; };
  for (std::size_t k = 1; k <= steps; ++k) {
    const double k1c = v, k1v = acc(t, c);
    const double k2c = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, c + 0.5 * h * k1c);
    const double k3c = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, c + 0.5 * h * k2c);
    const double k4c = v + h * k3v, k4v = acc(t + h, c + h * k3c);
    c += h / 6.0 * (k1c + 2 * k2c + 2 * k3c + k4c);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    t = static_cast<double>(k) * h;
    if (k % stride == 0) out.push_back(c);
  }
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace ref
