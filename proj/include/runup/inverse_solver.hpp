#pragma once

#include <cstddef>
#include <optional>

#include "runup/forward_solver.hpp"
#include "runup/hodograph.hpp"
#include "runup/numerics.hpp"
#include "runup/time_series.hpp"

namespace runup {

struct InversionParams {
  std::optional<double> bromwich_a;  // default 6 / window
  double pad_factor = 2.0;           // window = next_pow2(pad_factor * N) * dt
  double eps_reg = 1e-10;            // floor on |1 + s^2 sum b_n/(a_n + s^2)|
  double trusted_fraction = 0.8;     // leading part of the output used for metrics
};

struct MultiplierStats {
  std::size_t floor_hits = 0;
};

// M(s) = (1 + s^2 sum_n b_n / (a_n + s^2))^{-1}, with the denominator magnitude
// floored at eps_reg. Every use of the floor is counted in `stats`.
cplx inversion_multiplier(const ModeSet& modes, cplx s, double eps_reg = 1e-10,
                          MultiplierStats* stats = nullptr);

struct Recovery {
  TimeSeries psi_b;
  std::size_t floor_hits = 0;
  double imag_residue = 0.0;
  std::size_t trusted_count = 0;
  double bromwich_a = 0.0;
  double window = 0.0;
};

// psi_b from psi_sh: trapezoid Laplace transform on the damped Bromwich line,
// multiplication by M(s), inverse FFT, truncation to the input length.
Recovery recover_boundary(const TimeSeries& psi_sh, const ModeSet& modes,
                          const InversionParams& params = {});

inline TimeSeries recover_psi_b(const TimeSeries& psi_sh, const ModeSet& modes,
                                const InversionParams& params = {}) {
  return recover_boundary(psi_sh, modes, params).psi_b;
}

struct InversionConfig {
  Bathymetry bathymetry;
  std::size_t n_modes = 500;
  std::size_t sigma_nodes = 300;
  double sigma_extension = 0.05;  // field grid covers [0, (1 + ext) sigma_L]
  InversionParams laplace;
  DuhamelOptions duhamel;
  double breaking_threshold = 1e-3;
  bool fail_on_breaking = true;
  bool truncation_check = true;  // re-run the recovery with half the modes
};

struct InversionDiagnostics {
  BreakingReport breaking;
  std::size_t floor_hits = 0;
  double imag_residue = 0.0;
  double truncation_change = 0.0;  // rel. L2 change of psi_b with half the modes
  std::size_t gamma_boundary_hits = 0;
  std::size_t trusted_count = 0;
  double bromwich_a = 0.0;
  double window = 0.0;
};

struct RunupInversion {
  TimeSeries psi_sh;
  TimeSeries psi_b;
  TimeSeries phi_b;  // phi(sigma_L, tau)
  TimeSeries eta_b;  // eta(L, t)
  TimeSeries u_b;    // u(L, t)
  HodographField field;
  InversionDiagnostics diagnostics;
};

// The four-step inversion: shore transform, Laplace-domain recovery of psi_b,
// field reconstruction, and inverse transform along x = L. Errors leave with
// the failing stage in Error::stage().
RunupInversion invert_runup(const TimeSeries& R, const InversionConfig& config = {});

}  // namespace runup
