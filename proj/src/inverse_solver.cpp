#include "runup/inverse_solver.hpp"

#include <cmath>
#include <string>

#include "runup/error.hpp"

namespace runup {

cplx inversion_multiplier(const ModeSet& modes, cplx s, double eps_reg, MultiplierStats* stats) {
  if (modes.n_modes() == 0) throw ValidationError("inversion_multiplier: empty mode set");
  const cplx s2 = s * s;
  cplx sum = 0.0;
  for (std::size_t n = 0; n < modes.n_modes(); ++n) sum += modes.b[n] / (modes.a[n] + s2);
  cplx den = 1.0 + s2 * sum;
  const double mag = std::abs(den);
  if (mag < eps_reg) {
    den = mag > 0.0 ? den * (eps_reg / mag) : cplx(eps_reg, 0.0);
    if (stats != nullptr) ++stats->floor_hits;
  }
  return 1.0 / den;
}

Recovery recover_boundary(const TimeSeries& psi_sh, const ModeSet& modes,
                          const InversionParams& params) {
  if (std::abs(psi_sh.t0()) > 1e-12 * psi_sh.dt()) {
    throw ValidationError("recover_psi_b: psi_sh must start at tau = 0");
  }
  if (std::abs(psi_sh[0]) > 5e-3 * psi_sh.max_abs() + 1e-8) {
    throw ValidationError("recover_psi_b: psi_sh(0) must vanish, got " + std::to_string(psi_sh[0]));
  }
  if (!(params.pad_factor >= 1.0)) throw ValidationError("laplace.pad_factor must be >= 1");
  if (!(params.eps_reg > 0.0)) throw ValidationError("laplace.eps_reg must be positive");

  const std::size_t n = psi_sh.size();
  const std::size_t n_fft = next_pow2(static_cast<std::size_t>(std::ceil(params.pad_factor * static_cast<double>(n))));
  const double window = static_cast<double>(n_fft) * psi_sh.dt();
  const double a = params.bromwich_a.value_or(6.0 / window);
  if (!(a > 0.0)) throw ValidationError("laplace.bromwich_a must be positive");

  const std::vector<cplx> s = bromwich_grid(a, window, n_fft);
  ComplexSamples samples = laplace_forward(psi_sh, s);
  MultiplierStats stats;
  for (std::size_t m = 0; m < s.size(); ++m) {
    samples.F_values[m] *= inversion_multiplier(modes, s[m], params.eps_reg, &stats);
  }
  InverseLaplaceReport report;
  TimeSeries full = inverse_laplace_ifft(samples, window, &report);

  Recovery out{full.head(n), stats.floor_hits, report.imag_residue, 0, a, window};
  out.trusted_count = static_cast<std::size_t>(params.trusted_fraction * static_cast<double>(n));
  return out;
}

RunupInversion invert_runup(const TimeSeries& R, const InversionConfig& config) {
  config.bathymetry.validate();
  if (config.n_modes == 0) throw ValidationError("n_modes must be positive");
  if (config.sigma_nodes < 3) throw ValidationError("sigma_nodes must be at least 3");
  if (!(config.sigma_extension >= 0.0)) throw ValidationError("sigma_extension must be >= 0");
  if (R.size() < 3) throw ValidationError("run-up record needs at least 3 samples");
  if (!starts_at_rest(R)) throw ValidationError("run-up record must start at rest");

  const Bathymetry& bathy = config.bathymetry;
  const ModeSet modes = build_modes(bathy.sigma_L, config.n_modes);

  TimeSeries psi_sh = run_stage("shore_to_hodograph", [&] { return shore_to_hodograph(R); });
  Recovery rec = run_stage("recover_psi_b",
                           [&] { return recover_boundary(psi_sh, modes, config.laplace); });

  InversionDiagnostics diag;
  diag.floor_hits = rec.floor_hits;
  diag.imag_residue = rec.imag_residue;
  diag.trusted_count = rec.trusted_count;
  diag.bromwich_a = rec.bromwich_a;
  diag.window = rec.window;
  if (config.truncation_check && config.n_modes >= 2) {
    const ModeSet half = build_modes(bathy.sigma_L, config.n_modes / 2);
    const TimeSeries coarse = run_stage(
        "recover_psi_b", [&] { return recover_psi_b(psi_sh, half, config.laplace); });
    diag.truncation_change = relative_l2(coarse.span(), rec.psi_b.span(), rec.trusted_count);
  }

  const ModeSet filled = run_stage("duhamel_coefficients", [&] {
    return duhamel_coefficients(rec.psi_b, modes, config.duhamel);
  });

  TimeSeries phi_b = boundary_phi(filled, rec.psi_b);

  FieldGrid grid;
  grid.sigma_nodes = config.sigma_nodes;
  grid.sigma_max = bathy.sigma_L * (1.0 + config.sigma_extension);
  HodographField field =
      run_stage("reconstruct_field", [&] { return reconstruct_field(filled, rec.psi_b, grid); });

  diag.breaking = breaking_diagnostic(field, config.breaking_threshold);
  if (config.fail_on_breaking && diag.breaking.breaking) {
    throw NumericalError("Jacobian of the hodograph map drops to " +
                             std::to_string(diag.breaking.min_jacobian) + " (wave breaking)",
                         "breaking_diagnostic");
  }

  BuoyRecord buoy =
      run_stage("inverse_cgt_on_gamma", [&] { return inverse_cgt_on_gamma(field, bathy); });
  diag.gamma_boundary_hits = buoy.boundary_hits;

  return RunupInversion{std::move(psi_sh), std::move(rec.psi_b), std::move(phi_b),
                        std::move(buoy.eta_b), std::move(buoy.u_b), std::move(field), diag};
}

}  // namespace runup
