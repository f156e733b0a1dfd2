#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "runup/hodograph.hpp"
#include "runup/numerics.hpp"
#include "runup/time_series.hpp"

namespace runup {

// Truncated Fourier-Bessel data for the hodograph problem on [0, sigma_L].
//   a_n = j_n^2 / (4 sigma_L),  b_n = -2 / (j_n J1(j_n))
// c and d hold the coefficient histories c_n(tau), d_n(tau) = \int c_n, one
// row per mode; they stay empty until duhamel_coefficients fills them.
struct ModeSet {
  double sigma_L = 1.0;
  std::vector<double> j;
  std::vector<double> a;
  std::vector<double> b;
  double tau0 = 0.0;
  double dtau = 0.0;
  Eigen::MatrixXd c;
  Eigen::MatrixXd d;

  std::size_t n_modes() const { return j.size(); }
  bool has_coefficients() const { return c.size() > 0; }
  TimeSeries c_series(std::size_t n) const;
  TimeSeries d_series(std::size_t n) const;
};

ModeSet build_modes(double sigma_L, std::size_t n_modes);

struct DuhamelOptions {
  ConvolutionMethod method = ConvolutionMethod::direct;
  // psi_b(0) and psi_b'(0) must be below this fraction of max|psi_b| and
  // max|psi_b'| respectively (plus 1e-8 absolute).
  double compatibility_tolerance = 5e-3;
};

// Throws ValidationError if psi_b does not start from rest.
void check_compatibility(const TimeSeries& psi_b, double tolerance);

// Solves c_n'' + a_n c_n = b_n psi_b'' from rest for every mode. Two
// integrations by parts turn the sine-kernel Duhamel integral into
//   c_n = b_n (psi_b - w_n Im C_n),  d_n = b_n Re C_n,
//   C_n(tau) = \int_0^tau e^{i w_n (tau - s)} psi_b(s) ds,  w_n = sqrt(a_n),
// so psi_b'' is never differenced and modes with w_n*dtau >> 1 stay accurate.
ModeSet duhamel_coefficients(const TimeSeries& psi_b, const ModeSet& modes,
                             const DuhamelOptions& options = {});

struct FieldGrid {
  std::size_t sigma_nodes = 300;
  double sigma_max = 0.0;  // 0 means sigma_L
};

// psi = sum c_n J0(j_n rho) + psi_b, phi = sum d_n j_n J1(j_n rho) / (2 sigma_L rho),
// rho = sqrt(sigma/sigma_L), with the slowly converging part of phi summed in
// closed form (it equals -psi_b' for the full series). Rows with
// sigma > sigma_L are a second-order Taylor expansion from sigma_L built from
// the field equations, since the series does not continue the solution there.
HodographField reconstruct_field(const ModeSet& modes, const TimeSeries& psi_b,
                                 const FieldGrid& grid = {});

struct ShorelineFields {
  TimeSeries psi;  // psi(0, tau)
  TimeSeries phi;  // phi(0, tau)
};

// phi(sigma_L, tau) from filled coefficients.
TimeSeries boundary_phi(const ModeSet& modes, const TimeSeries& psi_b);

// Shoreline values from filled coefficients; phi(0, tau) = -psi_tau(0, tau).
ShorelineFields shoreline_fields(const ModeSet& modes, const TimeSeries& psi_b);

// psi_sh = sum_n c_n + psi_b (the shoreline equation), truncated at the
// modes in `modes`. Only the constants of `modes` are used.
TimeSeries shoreline_equation(const TimeSeries& psi_b, const ModeSet& modes,
                              const DuhamelOptions& options = {});

}  // namespace runup
