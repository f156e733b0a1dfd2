#include "runup/hodograph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "runup/error.hpp"
#include "runup/numerics.hpp"

namespace runup {

void Bathymetry::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string("bathymetry.") + name + " must be positive and finite");
    }
  };
  check(L, "L");
  check(sigma_L, "sigma_L");
  check(alpha, "alpha");
  check(H0, "H0");
  check(g, "g");
}

HodographField HodographField::zeros(double sigma_max, std::size_t n_sigma, double dtau,
                                     std::size_t n_tau) {
  HodographField f;
  f.dsigma = sigma_max / static_cast<double>(n_sigma - 1);
  f.dtau = dtau;
  f.psi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_sigma), static_cast<Eigen::Index>(n_tau));
  f.phi = f.psi;
  return f;
}

HodographState cgt_forward(const PhysicalState& s) {
  if (s.x + s.eta < 0.0) {
    throw ValidationError("cgt_forward: dry point, x + eta = " + std::to_string(s.x + s.eta));
  }
  return {s.x + s.eta, s.t - s.u, s.eta + 0.5 * s.u * s.u, s.u};
}

PhysicalState cgt_inverse(const HodographState& h) {
  const double half_phi2 = 0.5 * h.phi * h.phi;
  return {h.sigma - h.psi + half_phi2, h.tau + h.phi, h.psi - half_phi2, h.phi};
}

namespace {

void require_increasing(std::span<const double> v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) {
      throw NumericalError(std::string(what) + " is not strictly increasing near sample " +
                           std::to_string(i) + " (wave breaking)");
    }
  }
}

// Uniform grid start, start + step, ... not beyond `stop`.
std::vector<double> uniform_until(double start, double step, double stop) {
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double v = start + static_cast<double>(k) * step;
    if (v > stop + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

}  // namespace

bool starts_at_rest(const TimeSeries& R, double tolerance) {
  if (R.size() < 3) throw ValidationError("starts_at_rest needs at least 3 samples");
  const std::vector<double> rp = gradient(R.span(), R.dt(), R.size() >= 5 ? 4 : 2);
  double max_rp = 0.0;
  for (double v : rp) max_rp = std::max(max_rp, std::abs(v));
  return std::abs(R[0]) <= tolerance * R.max_abs() && std::abs(rp[0]) <= tolerance * max_rp;
}

TimeSeries shore_to_hodograph(const TimeSeries& R) {
  if (R.size() < 3) throw ValidationError("shore_to_hodograph needs at least 3 samples");
  const std::size_t n = R.size();
  const std::vector<double> rp = gradient(R.span(), R.dt(), n >= 5 ? 4 : 2);
  std::vector<double> tau(n), psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    tau[i] = R.time(i) + rp[i];
    psi[i] = R[i] + 0.5 * rp[i] * rp[i];
  }
  if (starts_at_rest(R)) {
    tau[0] = R.t0();
    psi[0] = 0.0;
  }
  require_increasing(tau, "tau(t) = t + R'(t)");
  std::vector<double> grid = uniform_until(tau[0], R.dt(), tau[n - 1]);
  if (grid.size() < 2) throw ValidationError("shore_to_hodograph: record too short");
  return TimeSeries(tau[0], R.dt(), pchip(tau, psi, grid));
}

TimeSeries hodograph_to_shore(const TimeSeries& psi_sh, const TimeSeries& phi_sh) {
  const std::size_t n = std::min(psi_sh.size(), phi_sh.size());
  if (std::abs(psi_sh.dt() - phi_sh.dt()) > 1e-12 * psi_sh.dt() || psi_sh.t0() != phi_sh.t0()) {
    throw ValidationError("hodograph_to_shore: psi and phi are on different grids");
  }
  std::vector<double> t(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = psi_sh.time(i) + phi_sh[i];
    r[i] = psi_sh[i] - 0.5 * phi_sh[i] * phi_sh[i];
  }
  if (std::abs(psi_sh[0]) <= 1e-3 * psi_sh.max_abs() + 1e-12 &&
      std::abs(phi_sh[0]) <= 1e-3 * phi_sh.max_abs() + 1e-12) {
    t[0] = psi_sh.t0();
    r[0] = 0.0;
  }
  require_increasing(t, "t(tau) = tau + phi(0, tau)");
  std::vector<double> grid = uniform_until(t[0], psi_sh.dt(), t[n - 1]);
  if (grid.size() < 2) throw ValidationError("hodograph_to_shore: record too short");
  return TimeSeries(t[0], psi_sh.dt(), pchip(t, r, grid));
}

BuoyRecord inverse_cgt_on_gamma(const HodographField& field, const Bathymetry& bathymetry) {
  const std::size_t ns = field.n_sigma();
  const std::size_t nt = field.n_tau();
  if (ns < 3 || nt < 2) throw ValidationError("inverse_cgt_on_gamma: field grid too small");
  const double L = bathymetry.L;

  std::vector<double> t(nt), eta(nt), u(nt), sig(nt);
  std::vector<double> r(ns);
  std::size_t hits = 0;
  for (std::size_t j = 0; j < nt; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < ns; ++i) {
      const double p = field.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      r[i] = field.sigma(i) - L - field.psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
             0.5 * p * p;
      if (std::abs(r[i]) < std::abs(r[best])) best = i;
    }
    if (best == 0 || best + 1 == ns) ++hits;

    std::size_t lo = best, hi = best;
    if (best > 0 && r[best - 1] * r[best] <= 0.0) {
      lo = best - 1;
    } else if (best + 1 < ns && r[best] * r[best + 1] <= 0.0) {
      hi = best + 1;
    }
    double w = 0.0;  // weight of node `hi`
    if (lo != hi && r[lo] != r[hi]) w = r[lo] / (r[lo] - r[hi]);
    const auto J = static_cast<Eigen::Index>(j);
    const auto Lo = static_cast<Eigen::Index>(lo), Hi = static_cast<Eigen::Index>(hi);
    const double psi = (1.0 - w) * field.psi(Lo, J) + w * field.psi(Hi, J);
    const double phi = (1.0 - w) * field.phi(Lo, J) + w * field.phi(Hi, J);
    sig[j] = (1.0 - w) * field.sigma(lo) + w * field.sigma(hi);
    t[j] = field.tau(j) + phi;
    eta[j] = psi - 0.5 * phi * phi;
    u[j] = phi;
  }
  if (static_cast<double>(hits) > 0.01 * static_cast<double>(nt)) {
    throw NumericalError("curve Gamma leaves the sigma grid at " + std::to_string(hits) + " of " +
                         std::to_string(nt) + " tau samples; extend the grid");
  }
  require_increasing(t, "buoy time t = tau + phi on Gamma");
  std::vector<double> grid = uniform_until(t[0], field.dtau, t[nt - 1]);
  if (grid.size() < 2) throw ValidationError("inverse_cgt_on_gamma: record too short");
  return BuoyRecord{TimeSeries(t[0], field.dtau, pchip(t, eta, grid)),
                    TimeSeries(t[0], field.dtau, pchip(t, u, grid)),
                    TimeSeries(field.tau0, field.dtau, std::move(sig)), hits};
}

BreakingReport breaking_diagnostic(const HodographField& field, double threshold) {
  const auto ns = static_cast<Eigen::Index>(field.n_sigma());
  const auto nt = static_cast<Eigen::Index>(field.n_tau());
  BreakingReport rep;
  if (ns < 3 || nt < 3) return rep;
  const double hs = 2.0 * field.dsigma, ht = 2.0 * field.dtau;
  double min_abs = INFINITY, min_signed = INFINITY;
  const auto& P = field.psi;
  const auto& F = field.phi;
  for (Eigen::Index j = 1; j + 1 < nt; ++j) {
    for (Eigen::Index i = 1; i + 1 < ns; ++i) {
      const double phi = F(i, j);
      const double psi_s = (P(i + 1, j) - P(i - 1, j)) / hs;
      const double psi_t = (P(i, j + 1) - P(i, j - 1)) / ht;
      const double phi_s = (F(i + 1, j) - F(i - 1, j)) / hs;
      const double phi_t = (F(i, j + 1) - F(i, j - 1)) / ht;
      const double x_s = 1.0 - psi_s + phi * phi_s;
      const double x_t = -psi_t + phi * phi_t;
      const double t_s = phi_s;
      const double t_t = 1.0 + phi_t;
      const double det = x_s * t_t - x_t * t_s;
      min_abs = std::min(min_abs, std::abs(det));
      min_signed = std::min(min_signed, det);
    }
  }
  rep.min_abs_jacobian = min_abs;
  rep.min_jacobian = min_signed;
  rep.breaking = min_signed < threshold;
  return rep;
}

Quantity parse_quantity(std::string_view name) {
  if (name == "x") return Quantity::x;
  if (name == "t") return Quantity::t;
  if (name == "eta") return Quantity::eta;
  if (name == "u") return Quantity::u;
  throw ValidationError("unknown quantity kind '" + std::string(name) + "'");
}

double dimensionalize_nswe(double value, Quantity kind, const Bathymetry& b) {
  switch (kind) {
    case Quantity::x: return b.H0 / b.alpha * value;
    case Quantity::t: return std::sqrt(b.H0 / b.g) * value / b.alpha;
    case Quantity::eta: return b.H0 * value;
    case Quantity::u: return std::sqrt(b.H0 * b.g) * value;
  }
  throw ValidationError("unknown quantity kind");
}

double dimensionalize_boussinesq(double value, Quantity kind, double H0, double g) {
  switch (kind) {
    case Quantity::x: return H0 / std::sqrt(3.0) * value;
    case Quantity::t: return std::sqrt(H0 / (3.0 * g)) * value;
    case Quantity::eta: return 4.0 * H0 * value;
    case Quantity::u: break;
  }
  throw ValidationError("the Boussinesq scaling has no velocity kind");
}

}  // namespace runup
