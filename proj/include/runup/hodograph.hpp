#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string_view>

#include "runup/time_series.hpp"

namespace runup {

// Physical variables of the shallow water system on the sloping beach.
struct PhysicalState {
  double x = 0.0;
  double t = 0.0;
  double eta = 0.0;
  double u = 0.0;
};

// Carrier-Greenspan variables.
struct HodographState {
  double sigma = 0.0;
  double tau = 0.0;
  double psi = 0.0;
  double phi = 0.0;
};

struct Bathymetry {
  double L = 1.0;        // length of the sloping interval (dimensionless)
  double sigma_L = 1.0;  // hodograph coordinate of the buoy, normally equal to L
  double alpha = 1.0;    // slope
  double H0 = 1.0;       // characteristic height [m]
  double g = 1.0;        // gravity [m/s^2]

  // Throws ValidationError naming the first non-positive field.
  void validate() const;
};

// psi and phi on a uniform (sigma, tau) grid. Row i is sigma_i, column j is tau_j.
struct HodographField {
  double sigma0 = 0.0;
  double dsigma = 1.0;
  double tau0 = 0.0;
  double dtau = 1.0;
  Eigen::MatrixXd psi;
  Eigen::MatrixXd phi;

  std::size_t n_sigma() const { return static_cast<std::size_t>(psi.rows()); }
  std::size_t n_tau() const { return static_cast<std::size_t>(psi.cols()); }
  double sigma(std::size_t i) const { return sigma0 + static_cast<double>(i) * dsigma; }
  double tau(std::size_t j) const { return tau0 + static_cast<double>(j) * dtau; }

  static HodographField zeros(double sigma_max, std::size_t n_sigma, double dtau,
                              std::size_t n_tau);
};

HodographState cgt_forward(const PhysicalState& state);
// x = sigma - psi + phi^2/2, t = tau + phi, eta = psi - phi^2/2, u = phi.
PhysicalState cgt_inverse(const HodographState& state);

// True when |R(t0)| and |R'(t0)| are at most `tolerance` times max|R| and
// max|R'|, with R' from the same differences as shore_to_hodograph. An
// identically zero record is at rest.
bool starts_at_rest(const TimeSeries& R, double tolerance = 1e-3);

// psi at the shoreline from run-up. With u = -R' at the moving shoreline the
// transform reads tau = t + R', psi = R + R'^2/2. R' uses fourth-order
// differences; the (tau, psi) pairs are resampled to a uniform tau grid with
// the input step by monotone cubic interpolation. When R starts at rest the
// first sample is pinned to (t0, 0). Throws NumericalError if tau(t) is not
// strictly increasing (breaking at the shore).
TimeSeries shore_to_hodograph(const TimeSeries& R);

// Inverse of the above given both shoreline fields: t = tau + phi,
// R = psi - phi^2/2, resampled to a uniform t grid with the input step. A
// start at rest is pinned to (tau0, 0) as above.
TimeSeries hodograph_to_shore(const TimeSeries& psi_sh, const TimeSeries& phi_sh);

struct BuoyRecord {
  TimeSeries eta_b;       // eta(L, t) on a uniform t grid
  TimeSeries u_b;         // u(L, t) on the same grid
  TimeSeries sigma_star;  // position of the curve Gamma, per tau sample
  std::size_t boundary_hits = 0;
};

// Follows x = L through the hodograph field: for each tau the sigma minimizing
// |sigma - L - psi + phi^2/2| (first minimum on the grid, then linear
// refinement inside the bracketing cell). Throws NumericalError when more than
// 1% of the minimizers sit on the first or last sigma row.
BuoyRecord inverse_cgt_on_gamma(const HodographField& field, const Bathymetry& bathymetry);

struct BreakingReport {
  double min_abs_jacobian = 1.0;
  double min_jacobian = 1.0;  // signed
  bool breaking = false;      // min_jacobian < threshold
};

// det d(x,t)/d(sigma,tau) over interior nodes by central differences.
BreakingReport breaking_diagnostic(const HodographField& field, double threshold = 1e-3);

enum class Quantity { x, t, eta, u };

// "x", "t", "eta" or "u"; anything else is a ValidationError.
Quantity parse_quantity(std::string_view name);

double dimensionalize_nswe(double value, Quantity kind, const Bathymetry& bathymetry);
// Only x, t and eta have a Boussinesq scaling; u is rejected.
double dimensionalize_boussinesq(double value, Quantity kind, double H0, double g);

}  // namespace runup
