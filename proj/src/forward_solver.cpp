#include "runup/forward_solver.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "runup/error.hpp"

namespace runup {

TimeSeries ModeSet::c_series(std::size_t n) const {
  if (!has_coefficients()) throw ValidationError("mode set has no coefficients");
  const Eigen::VectorXd row = c.row(static_cast<Eigen::Index>(n));
  return TimeSeries(tau0, dtau, std::vector<double>(row.data(), row.data() + row.size()));
}

TimeSeries ModeSet::d_series(std::size_t n) const {
  if (!has_coefficients()) throw ValidationError("mode set has no coefficients");
  const Eigen::VectorXd row = d.row(static_cast<Eigen::Index>(n));
  return TimeSeries(tau0, dtau, std::vector<double>(row.data(), row.data() + row.size()));
}

ModeSet build_modes(double sigma_L, std::size_t n_modes) {
  if (!(sigma_L > 0.0)) throw ValidationError("build_modes: sigma_L must be positive");
  if (n_modes == 0) throw ValidationError("build_modes: need at least one mode");
  ModeSet m;
  m.sigma_L = sigma_L;
  m.j = bessel_j0_roots(n_modes);
  m.a.resize(n_modes);
  m.b.resize(n_modes);
  for (std::size_t n = 0; n < n_modes; ++n) {
    m.a[n] = m.j[n] * m.j[n] / (4.0 * sigma_L);
    m.b[n] = -2.0 / (m.j[n] * bessel_j(1, m.j[n]));
  }
  return m;
}

void check_compatibility(const TimeSeries& psi_b, double tolerance) {
  if (psi_b.size() < 3) throw ValidationError("boundary series needs at least 3 samples");
  const std::vector<double> dp = gradient(psi_b.span(), psi_b.dt());
  double max_dp = 0.0;
  for (double v : dp) max_dp = std::max(max_dp, std::abs(v));
  const double v0 = std::abs(psi_b[0]);
  const double d0 = std::abs(dp[0]);
  if (v0 > tolerance * psi_b.max_abs() + 1e-8 || d0 > tolerance * max_dp + 1e-8) {
    throw ValidationError("boundary series violates compatibility: psi_b(0) = " +
                          std::to_string(psi_b[0]) + ", psi_b'(0) = " + std::to_string(dp[0]));
  }
}

ModeSet duhamel_coefficients(const TimeSeries& psi_b, const ModeSet& modes,
                             const DuhamelOptions& options) {
  check_compatibility(psi_b, options.compatibility_tolerance);
  ModeSet out = modes;
  const std::size_t nm = modes.n_modes();
  const std::size_t nt = psi_b.size();
  out.tau0 = psi_b.t0();
  out.dtau = psi_b.dt();
  out.c.resize(static_cast<Eigen::Index>(nm), static_cast<Eigen::Index>(nt));
  out.d.resize(static_cast<Eigen::Index>(nm), static_cast<Eigen::Index>(nt));

  const ExponentialConvolver conv(psi_b.span(), psi_b.dt());
  std::vector<cplx> C(nt);
  for (std::size_t n = 0; n < nm; ++n) {
    const double w = std::sqrt(modes.a[n]);
    conv.apply(w, options.method, C);
    const auto row = static_cast<Eigen::Index>(n);
    for (std::size_t k = 0; k < nt; ++k) {
      const auto col = static_cast<Eigen::Index>(k);
      out.c(row, col) = modes.b[n] * (psi_b[k] - w * C[k].imag());
      out.d(row, col) = modes.b[n] * C[k].real();
    }
  }
  return out;
}

namespace {

void require_coefficients(const ModeSet& modes, const TimeSeries& psi_b) {
  if (!modes.has_coefficients()) {
    throw ValidationError("mode set has no coefficients; run duhamel_coefficients first");
  }
  if (static_cast<std::size_t>(modes.c.cols()) != psi_b.size()) {
    throw ValidationError("coefficients and boundary series have different lengths");
  }
}

// Phi is split as -psi_b' + sum (d_n - b_n psi_b' / a_n) w_n(sigma), which is
// exact because sum_n (b_n / a_n) J0(j_n rho) = sigma - sigma_L. The remainder
// series converges fast everywhere including sigma = 0 and sigma = sigma_L.
// The truncated form below is sum d_n w_n + psi_b' * tail_weight.
double tail_weight(const ModeSet& modes, const double* w) {
  double s = -1.0;
  for (std::size_t n = 0; n < modes.n_modes(); ++n) s -= modes.b[n] / modes.a[n] * w[n];
  return s;
}

std::vector<double> phi_weights(const ModeSet& modes, double sigma) {
  const double rho = std::sqrt(sigma / modes.sigma_L);
  std::vector<double> w(modes.n_modes());
  for (std::size_t n = 0; n < w.size(); ++n) {
    const double jn = modes.j[n];
    w[n] = rho > 0.0 ? jn * bessel_j(1, jn * rho) / (2.0 * modes.sigma_L * rho) : modes.a[n];
  }
  return w;
}

std::vector<double> phi_row(const ModeSet& modes, const TimeSeries& psi_b, double sigma) {
  const std::vector<double> w = phi_weights(modes, sigma);
  const double tw = tail_weight(modes, w.data());
  const std::vector<double> dp = gradient(psi_b.span(), psi_b.dt());
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const Eigen::RowVectorXd series = wv.transpose() * modes.d;
  std::vector<double> out(psi_b.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = series(static_cast<Eigen::Index>(k)) + tw * dp[k];
  return out;
}

}  // namespace

TimeSeries boundary_phi(const ModeSet& modes, const TimeSeries& psi_b) {
  require_coefficients(modes, psi_b);
  return TimeSeries(psi_b.t0(), psi_b.dt(), phi_row(modes, psi_b, modes.sigma_L));
}

HodographField reconstruct_field(const ModeSet& modes, const TimeSeries& psi_b,
                                 const FieldGrid& grid) {
  require_coefficients(modes, psi_b);
  if (grid.sigma_nodes < 2) throw ValidationError("field grid needs at least 2 sigma nodes");
  const double sigma_L = modes.sigma_L;
  const double sigma_max = grid.sigma_max > 0.0 ? grid.sigma_max : sigma_L;
  const auto ns = static_cast<Eigen::Index>(grid.sigma_nodes);
  const auto nm = static_cast<Eigen::Index>(modes.n_modes());
  const auto nt = static_cast<Eigen::Index>(psi_b.size());

  HodographField f;
  f.sigma0 = 0.0;
  f.dsigma = sigma_max / static_cast<double>(ns - 1);
  f.tau0 = psi_b.t0();
  f.dtau = psi_b.dt();

  // Rows inside [0, sigma_L] come from the series; the series does not
  // continue the solution past sigma_L, so rows beyond use a Taylor expansion.
  Eigen::Index inside = 0;
  while (inside < ns && f.sigma(static_cast<std::size_t>(inside)) <= sigma_L * (1.0 + 1e-12)) ++inside;

  Eigen::MatrixXd b0(inside, nm), b1(inside, nm);
  Eigen::VectorXd tw(inside);
  for (Eigen::Index i = 0; i < inside; ++i) {
    const double sigma = f.sigma(static_cast<std::size_t>(i));
    const double rho = std::sqrt(sigma / sigma_L);
    const std::vector<double> w = phi_weights(modes, sigma);
    for (Eigen::Index n = 0; n < nm; ++n) {
      b0(i, n) = bessel_j(0, modes.j[static_cast<std::size_t>(n)] * rho);
      b1(i, n) = w[static_cast<std::size_t>(n)];
    }
    tw(i) = tail_weight(modes, w.data());
  }
  f.psi.resize(ns, nt);
  f.phi.resize(ns, nt);
  f.psi.topRows(inside).noalias() = b0 * modes.c;
  f.phi.topRows(inside).noalias() = b1 * modes.d;
  const Eigen::Map<const Eigen::RowVectorXd> pb(psi_b.values().data(), nt);
  const std::vector<double> dp = gradient(psi_b.span(), psi_b.dt());
  const Eigen::Map<const Eigen::RowVectorXd> dpv(dp.data(), nt);
  f.psi.topRows(inside).rowwise() += pb;
  f.phi.topRows(inside) += tw * dpv;
  // At sigma = 0 the field equation reduces to phi = -psi_tau, which avoids
  // the undamped high-mode weights a_n of the series limit.
  {
    const Eigen::RowVectorXd row0 = f.psi.row(0);
    const std::vector<double> g = gradient(std::span<const double>(row0.data(), row0.size()), f.dtau);
    for (Eigen::Index k = 0; k < nt; ++k) f.phi(0, k) = -g[static_cast<std::size_t>(k)];
  }

  if (inside < ns) {
    // psi_sigma = -phi_tau and sigma phi_sigma = -(psi_tau + phi), differentiated once more.
    const std::vector<double> phib = phi_row(modes, psi_b, sigma_L);
    const std::vector<double> dphi = gradient(phib, psi_b.dt());
    const std::vector<double> ddpsi = gradient(dp, psi_b.dt());
    const std::vector<double> ddphi = gradient(dphi, psi_b.dt());
    for (Eigen::Index k = 0; k < nt; ++k) {
      const auto q = static_cast<std::size_t>(k);
      const double psi_s = -dphi[q];
      const double psi_ss = (ddpsi[q] + dphi[q]) / sigma_L;
      const double phi_s = -(dp[q] + phib[q]) / sigma_L;
      const double phi_ss = (ddphi[q] - 2.0 * phi_s) / sigma_L;
      for (Eigen::Index i = inside; i < ns; ++i) {
        const double dl = f.sigma(static_cast<std::size_t>(i)) - sigma_L;
        f.psi(i, k) = psi_b[q] + dl * (psi_s + 0.5 * dl * psi_ss);
        f.phi(i, k) = phib[q] + dl * (phi_s + 0.5 * dl * phi_ss);
      }
    }
  }
  return f;
}

ShorelineFields shoreline_fields(const ModeSet& modes, const TimeSeries& psi_b) {
  require_coefficients(modes, psi_b);
  const std::size_t nt = psi_b.size();
  std::vector<double> psi(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    double sc = 0.0;
    for (std::size_t n = 0; n < modes.n_modes(); ++n) {
      sc += modes.c(static_cast<Eigen::Index>(n), col);
    }
    psi[k] = sc + psi_b[k];
  }
  std::vector<double> phi = gradient(psi, psi_b.dt());
  for (double& v : phi) v = -v;
  return {TimeSeries(psi_b.t0(), psi_b.dt(), std::move(psi)),
          TimeSeries(psi_b.t0(), psi_b.dt(), std::move(phi))};
}

TimeSeries shoreline_equation(const TimeSeries& psi_b, const ModeSet& modes,
                              const DuhamelOptions& options) {
  return shoreline_fields(duhamel_coefficients(psi_b, modes, options), psi_b).psi;
}

}  // namespace runup
