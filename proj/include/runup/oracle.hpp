#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "runup/hodograph.hpp"
#include "runup/time_series.hpp"

namespace runup {

enum class ProfileKind { n_wave, soliton_sech2, gaussian, two_gaussian, custom };

// Initial surface displacement eta0(x) on the beach, released from rest.
//   n_wave        {A1, x1, A2, x2}          A1 sech(x - x1) - A2 exp(-(x - x2)^2)
//   soliton_sech2 {A, k, x0}                A sech^2(k x - x0)
//   gaussian      {A, x0, s}                A exp(-s (x - x0)^2)
//   two_gaussian  {A1, x1, s1, A2, x2, s2}  sum of two gaussians
//   custom        any callable
class InitialProfile {
 public:
  InitialProfile(ProfileKind kind, std::vector<double> parameters);
  static InitialProfile custom(std::function<double(double)> eta0);
  // The four reference profiles, 'a' to 'd', all of amplitude 0.005.
  static InitialProfile reference(char which);

  ProfileKind kind() const { return kind_; }
  const std::vector<double>& parameters() const { return parameters_; }
  double operator()(double x) const;
  // Multiplies every amplitude by `factor`.
  InitialProfile scaled(double factor) const;

 private:
  ProfileKind kind_;
  std::vector<double> parameters_;
  std::function<double(double)> custom_;
  double scale_ = 1.0;
};

ProfileKind parse_profile_kind(std::string_view name);

struct HankelQuadrature {
  double k_max = 40.0;
  std::size_t k_nodes = 4000;
  double r_max = 7.0710678118654752;  // sqrt(50): sigma up to 50
  std::size_t r_nodes = 4000;
  // Largest accepted |2k Psi(k)| over the last 5% of [0, k_max], relative to
  // its maximum over the whole range.
  double tail_tolerance = 1e-4;
};

// Linear hodograph problem on the half line sigma > 0 from rest:
//   psi(sigma, tau) = \int 2k Psi(k) J0(2k sqrt(sigma)) cos(k tau) dk
//   phi(sigma, tau) = \int 2 Psi(k) (k / sqrt(sigma)) J1(2k sqrt(sigma)) sin(k tau) dk
//   Psi(k) = \int psi0(s) J0(2k sqrt(s)) ds
// J0(2k sqrt(sigma)) cos(k tau) separates the system, and Psi is the order-zero
// Hankel transform in r = sqrt(sigma). psi0(sigma) = eta0(x) with x the root of
// x + eta0(x) = sigma (zero initial velocity). Both integrals are trapezoid sums.
class SemiInfiniteSolution {
 public:
  explicit SemiInfiniteSolution(const InitialProfile& profile, const HankelQuadrature& q = {});

  double psi0(double sigma) const;
  double psi(double sigma, double tau) const;
  double phi(double sigma, double tau) const;
  // d/dtau phi(0, tau)
  double phi_tau_shore(double tau) const;

  std::vector<double> psi_series(double sigma, std::span<const double> tau) const;
  std::vector<double> phi_series(double sigma, std::span<const double> tau) const;
  HodographField field(double sigma_max, std::size_t sigma_nodes, double dtau,
                       std::size_t tau_nodes) const;

  // R(t) on t0 + i dt: Newton on t = tau + phi(0, tau), then R = psi - phi^2/2.
  TimeSeries runup(double t0, double dt, std::size_t n) const;
  // eta and u at the fixed physical point x on t0 + i dt.
  std::pair<TimeSeries, TimeSeries> physical_record(double x, double t0, double dt,
                                                    std::size_t n) const;

  double tail_ratio() const { return tail_ratio_; }
  const std::vector<double>& k() const { return k_; }
  const std::vector<double>& transform() const { return Psi_; }

 private:
  // sum_k w_k cos(k tau) and sum_k w_k sin(k tau) over the k grid
  std::pair<double, double> trig_sums(std::span<const double> w_cos,
                                      std::span<const double> w_sin, double tau) const;
  void sigma_weights(double sigma, std::vector<double>& wc, std::vector<double>& ws) const;

  InitialProfile profile_;
  std::vector<double> k_;
  std::vector<double> Psi_;
  std::vector<double> wk_;  // trapezoid weights in k
  std::vector<double> shore_cos_, shore_sin_, shore_dsin_;
  double tail_ratio_ = 0.0;
};

struct OracleGrids {
  double dt = 0.02;
  std::size_t samples = 1500;
  double sigma_buoy = 1.0;  // hodograph buoy for psi_b / phi_b
  double x_buoy = 1.0;      // physical buoy for eta / u
};

struct SemiInfiniteRecord {
  TimeSeries runup;       // R(t)
  TimeSeries psi_shore;   // psi(0, tau)
  TimeSeries psi_b;       // psi(sigma_buoy, tau)
  TimeSeries phi_b;       // phi(sigma_buoy, tau)
  TimeSeries eta_buoy;    // eta(x_buoy, t)
  TimeSeries u_buoy;      // u(x_buoy, t)
  double tail_ratio = 0.0;
};

// Throws NumericalError when the k-quadrature tail exceeds its tolerance.
SemiInfiniteRecord semi_infinite_ivp(const InitialProfile& profile,
                                     const HankelQuadrature& quadrature = {},
                                     const OracleGrids& grids = {});

struct FdGrid {
  std::size_t sigma_cells = 200;
  double cfl = 0.4;  // dtau <= cfl * dsigma / sqrt(sigma_L); must lie in (0, 1]
  std::function<double(double)> initial_psi;  // psi(sigma, 0); zero when empty
};

// Staggered leapfrog for psi_tau = -(sigma phi)_sigma, phi_tau = -psi_sigma:
// psi on nodes and integer steps, phi on half nodes and half steps. At
// sigma = 0 the equation reduces to psi_tau = -phi(0), with phi(0)
// extrapolated from the first two half nodes. psi(sigma_L) = psi_b, read with
// four-point Lagrange interpolation between samples. The returned field is
// sampled at the psi_b times; phi is averaged onto nodes.
HodographField fd_solve_ibvp(const TimeSeries& psi_b, double sigma_L, const FdGrid& grid = {});

// sum_i (psi^2 + sigma phi^2) dsigma at one tau column.
double fd_energy(const HodographField& field, std::size_t column);

}  // namespace runup
