#include "runup/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "runup/error.hpp"
#include "runup/numerics.hpp"

namespace runup {

namespace {

std::size_t parameter_count(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::n_wave: return 4;
    case ProfileKind::soliton_sech2: return 3;
    case ProfileKind::gaussian: return 3;
    case ProfileKind::two_gaussian: return 6;
    case ProfileKind::custom: return 0;
  }
  return 0;
}

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

InitialProfile::InitialProfile(ProfileKind kind, std::vector<double> parameters)
    : kind_(kind), parameters_(std::move(parameters)) {
  if (kind == ProfileKind::custom) {
    throw ValidationError("use InitialProfile::custom for callable profiles");
  }
  if (parameters_.size() != parameter_count(kind)) {
    throw ValidationError("profile expects " + std::to_string(parameter_count(kind)) +
                          " parameters, got " + std::to_string(parameters_.size()));
  }
}

InitialProfile InitialProfile::custom(std::function<double(double)> eta0) {
  InitialProfile p(ProfileKind::gaussian, {0.0, 0.0, 1.0});
  p.kind_ = ProfileKind::custom;
  p.parameters_.clear();
  p.custom_ = std::move(eta0);
  return p;
}

InitialProfile InitialProfile::reference(char which) {
  switch (which) {
    case 'a': return {ProfileKind::n_wave, {0.005, 16.0, 0.003, 13.0}};
    case 'b': return {ProfileKind::soliton_sech2, {0.005, 2.0, 6.0}};
    case 'c': return {ProfileKind::gaussian, {0.005, 7.0, 1.0}};
    case 'd': return {ProfileKind::two_gaussian, {0.005, 6.0, 2.0, 0.003, 10.0, 1.0}};
    default: break;
  }
  throw ValidationError(std::string("unknown reference profile '") + which + "'");
}

double InitialProfile::operator()(double x) const {
  const auto& p = parameters_;
  double v = 0.0;
  switch (kind_) {
    case ProfileKind::n_wave:
      v = p[0] * sech(x - p[1]) - p[2] * std::exp(-(x - p[3]) * (x - p[3]));
      break;
    case ProfileKind::soliton_sech2: {
      const double s = sech(p[1] * x - p[2]);
      v = p[0] * s * s;
      break;
    }
    case ProfileKind::gaussian:
      v = p[0] * std::exp(-p[2] * (x - p[1]) * (x - p[1]));
      break;
    case ProfileKind::two_gaussian:
      v = p[0] * std::exp(-p[2] * (x - p[1]) * (x - p[1])) +
          p[3] * std::exp(-p[5] * (x - p[4]) * (x - p[4]));
      break;
    case ProfileKind::custom:
      v = custom_(x);
      break;
  }
  return scale_ * v;
}

InitialProfile InitialProfile::scaled(double factor) const {
  InitialProfile p = *this;
  p.scale_ *= factor;
  return p;
}

ProfileKind parse_profile_kind(std::string_view name) {
  if (name == "n_wave") return ProfileKind::n_wave;
  if (name == "soliton_sech2") return ProfileKind::soliton_sech2;
  if (name == "gaussian") return ProfileKind::gaussian;
  if (name == "two_gaussian") return ProfileKind::two_gaussian;
  if (name == "custom") return ProfileKind::custom;
  throw ValidationError("unknown profile kind '" + std::string(name) + "'");
}

SemiInfiniteSolution::SemiInfiniteSolution(const InitialProfile& profile, const HankelQuadrature& q)
    : profile_(profile) {
  if (q.k_nodes < 2 || q.r_nodes < 2 || !(q.k_max > 0.0) || !(q.r_max > 0.0)) {
    throw ValidationError("Hankel quadrature needs positive ranges and >= 2 nodes");
  }
  const double dr = q.r_max / static_cast<double>(q.r_nodes - 1);
  std::vector<double> r(q.r_nodes), f(q.r_nodes);
  double fmax = 0.0;
  for (std::size_t i = 0; i < q.r_nodes; ++i) {
    r[i] = dr * static_cast<double>(i);
    const double w = (i == 0 || i + 1 == q.r_nodes) ? 0.5 * dr : dr;
    f[i] = 2.0 * r[i] * psi0(r[i] * r[i]) * w;
    fmax = std::max(fmax, std::abs(f[i]));
  }

  const double dk = q.k_max / static_cast<double>(q.k_nodes - 1);
  k_.resize(q.k_nodes);
  Psi_.assign(q.k_nodes, 0.0);
  wk_.resize(q.k_nodes);
  for (std::size_t m = 0; m < q.k_nodes; ++m) {
    k_[m] = dk * static_cast<double>(m);
    wk_[m] = (m == 0 || m + 1 == q.k_nodes) ? 0.5 * dk : dk;
  }
  // Nodes where the profile is negligible add nothing but Bessel evaluations.
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < q.r_nodes; ++i) {
    if (std::abs(f[i]) > 1e-18 * fmax) active.push_back(i);
  }
  for (std::size_t m = 0; m < q.k_nodes; ++m) {
    double acc = 0.0;
    for (std::size_t i : active) acc += f[i] * bessel_j(0, 2.0 * k_[m] * r[i]);
    Psi_[m] = acc;
  }

  shore_cos_.resize(q.k_nodes);
  shore_sin_.resize(q.k_nodes);
  shore_dsin_.resize(q.k_nodes);
  double peak = 0.0, tail = 0.0;
  const std::size_t tail_start = q.k_nodes - std::max<std::size_t>(1, q.k_nodes / 20);
  for (std::size_t m = 0; m < q.k_nodes; ++m) {
    const double kk = k_[m];
    shore_cos_[m] = wk_[m] * 2.0 * kk * Psi_[m];
    shore_sin_[m] = wk_[m] * 2.0 * kk * kk * Psi_[m];
    shore_dsin_[m] = wk_[m] * 2.0 * kk * kk * kk * Psi_[m];
    const double mag = std::abs(2.0 * kk * Psi_[m]);
    peak = std::max(peak, mag);
    if (m >= tail_start) tail = std::max(tail, mag);
  }
  tail_ratio_ = peak > 0.0 ? tail / peak : 0.0;
}

double SemiInfiniteSolution::psi0(double sigma) const {
  double x = sigma;
  for (int it = 0; it < 200; ++it) {
    const double next = sigma - profile_(x);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return profile_(x);
}

std::pair<double, double> SemiInfiniteSolution::trig_sums(std::span<const double> w_cos,
                                                          std::span<const double> w_sin,
                                                          double tau) const {
  const std::size_t n = k_.size();
  const double dk = n > 1 ? k_[1] - k_[0] : 0.0;
  const cplx step = std::polar(1.0, dk * tau);
  cplx e = 1.0;
  double c = 0.0, s = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    if (m % 64 == 0) e = std::polar(1.0, k_[m] * tau);
    if (!w_cos.empty()) c += w_cos[m] * e.real();
    if (!w_sin.empty()) s += w_sin[m] * e.imag();
    e *= step;
  }
  return {c, s};
}

void SemiInfiniteSolution::sigma_weights(double sigma, std::vector<double>& wc,
                                         std::vector<double>& ws) const {
  if (sigma < 0.0) throw ValidationError("hodograph coordinate sigma must be >= 0");
  if (sigma == 0.0) {
    wc = shore_cos_;
    ws = shore_sin_;
    return;
  }
  const double rs = std::sqrt(sigma);
  wc.resize(k_.size());
  ws.resize(k_.size());
  for (std::size_t m = 0; m < k_.size(); ++m) {
    const double z = 2.0 * k_[m] * rs;
    wc[m] = wk_[m] * 2.0 * k_[m] * Psi_[m] * bessel_j(0, z);
    ws[m] = wk_[m] * 2.0 * Psi_[m] * (k_[m] / rs) * bessel_j(1, z);
  }
}

double SemiInfiniteSolution::psi(double sigma, double tau) const {
  std::vector<double> wc, ws;
  sigma_weights(sigma, wc, ws);
  return trig_sums(wc, {}, tau).first;
}

double SemiInfiniteSolution::phi(double sigma, double tau) const {
  std::vector<double> wc, ws;
  sigma_weights(sigma, wc, ws);
  return trig_sums({}, ws, tau).second;
}

double SemiInfiniteSolution::phi_tau_shore(double tau) const {
  return trig_sums(shore_dsin_, {}, tau).first;
}

std::vector<double> SemiInfiniteSolution::psi_series(double sigma, std::span<const double> tau) const {
  std::vector<double> wc, ws, out;
  sigma_weights(sigma, wc, ws);
  out.reserve(tau.size());
  for (double t : tau) out.push_back(trig_sums(wc, {}, t).first);
  return out;
}

std::vector<double> SemiInfiniteSolution::phi_series(double sigma, std::span<const double> tau) const {
  std::vector<double> wc, ws, out;
  sigma_weights(sigma, wc, ws);
  out.reserve(tau.size());
  for (double t : tau) out.push_back(trig_sums({}, ws, t).second);
  return out;
}

HodographField SemiInfiniteSolution::field(double sigma_max, std::size_t sigma_nodes, double dtau,
                                           std::size_t tau_nodes) const {
  if (sigma_nodes < 2 || tau_nodes < 1) throw ValidationError("field grid too small");
  HodographField f = HodographField::zeros(sigma_max, sigma_nodes, dtau, tau_nodes);
  const auto nk = static_cast<Eigen::Index>(k_.size());
  Eigen::MatrixXd wc(static_cast<Eigen::Index>(sigma_nodes), nk), ws(wc.rows(), nk);
  std::vector<double> c, s;
  for (std::size_t i = 0; i < sigma_nodes; ++i) {
    sigma_weights(f.sigma(i), c, s);
    wc.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(c.data(), nk);
    ws.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(s.data(), nk);
  }
  constexpr std::size_t kBlock = 64;
  for (std::size_t j0 = 0; j0 < tau_nodes; j0 += kBlock) {
    const std::size_t nb = std::min(kBlock, tau_nodes - j0);
    Eigen::MatrixXd cs(nk, static_cast<Eigen::Index>(nb)), sn(nk, static_cast<Eigen::Index>(nb));
    for (std::size_t b = 0; b < nb; ++b) {
      const double tau = f.tau(j0 + b);
      for (Eigen::Index m = 0; m < nk; ++m) {
        const double arg = k_[static_cast<std::size_t>(m)] * tau;
        cs(m, static_cast<Eigen::Index>(b)) = std::cos(arg);
        sn(m, static_cast<Eigen::Index>(b)) = std::sin(arg);
      }
    }
    const auto cols = Eigen::seqN(static_cast<Eigen::Index>(j0), static_cast<Eigen::Index>(nb));
    f.psi(Eigen::all, cols) = wc * cs;
    f.phi(Eigen::all, cols) = ws * sn;
  }
  return f;
}

TimeSeries SemiInfiniteSolution::runup(double t0, double dt, std::size_t n) const {
  std::vector<double> R(n);
  double tau = t0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + dt * static_cast<double>(i);
    if (i > 0) tau += dt / std::max(0.1, 1.0 + phi_tau_shore(tau));
    bool done = false;
    for (int it = 0; it < 60 && !done; ++it) {
      const double g = tau + trig_sums({}, shore_sin_, tau).second - t;
      const double gp = 1.0 + phi_tau_shore(tau);
      if (!(gp > 0.0)) throw NumericalError("shoreline map t(tau) folds over (breaking)");
      const double step = g / gp;
      tau -= step;
      done = std::abs(step) <= 1e-15 * std::max(1.0, std::abs(tau));
    }
    if (!done) throw NumericalError("Newton iteration for the shoreline time did not converge");
    const auto [p, f] = trig_sums(shore_cos_, shore_sin_, tau);
    R[i] = p - 0.5 * f * f;
  }
  return TimeSeries(t0, dt, std::move(R));
}

std::pair<TimeSeries, TimeSeries> SemiInfiniteSolution::physical_record(double x, double t0,
                                                                        double dt,
                                                                        std::size_t n) const {
  if (!(x > 0.0)) throw ValidationError("physical_record needs x > 0");
  // psi and phi near sigma = x by quadratic interpolation through three columns.
  const double h = std::min(0.02, 0.5 * x);
  const double nodes[3] = {x - h, x, x + h};
  std::vector<double> wc[3], ws[3];
  for (int m = 0; m < 3; ++m) sigma_weights(nodes[m], wc[m], ws[m]);

  std::vector<double> eta(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + dt * static_cast<double>(i);
    double sigma = x, tau = t, psi = 0.0, phi = 0.0;
    bool done = false;
    for (int it = 0; it < 100 && !done; ++it) {
      double p[3], f[3];
      for (int m = 0; m < 3; ++m) std::tie(p[m], f[m]) = trig_sums(wc[m], ws[m], tau);
      const double y = (sigma - x) / h;
      const double l0 = 0.5 * y * (y - 1.0), l1 = 1.0 - y * y, l2 = 0.5 * y * (y + 1.0);
      psi = l0 * p[0] + l1 * p[1] + l2 * p[2];
      phi = l0 * f[0] + l1 * f[1] + l2 * f[2];
      const double s_new = x + psi - 0.5 * phi * phi;
      const double t_new = t - phi;
      done = std::abs(s_new - sigma) < 1e-14 && std::abs(t_new - tau) < 1e-14 * std::max(1.0, std::abs(t));
      sigma = s_new;
      tau = t_new;
      if (std::abs(sigma - x) > h) {
        throw NumericalError("physical record: displacement exceeds the interpolation stencil");
      }
    }
    if (!done) throw NumericalError("physical record: fixed-point iteration did not converge");
    eta[i] = psi - 0.5 * phi * phi;
    u[i] = phi;
  }
  return {TimeSeries(t0, dt, std::move(eta)), TimeSeries(t0, dt, std::move(u))};
}

SemiInfiniteRecord semi_infinite_ivp(const InitialProfile& profile, const HankelQuadrature& q,
                                     const OracleGrids& grids) {
  const SemiInfiniteSolution sol(profile, q);
  if (sol.tail_ratio() > q.tail_tolerance) {
    throw NumericalError("Hankel quadrature tail ratio " + std::to_string(sol.tail_ratio()) +
                         " exceeds tolerance; raise k_max");
  }
  std::vector<double> tau(grids.samples);
  for (std::size_t i = 0; i < grids.samples; ++i) tau[i] = grids.dt * static_cast<double>(i);
  auto series = [&](std::vector<double> v) { return TimeSeries(0.0, grids.dt, std::move(v)); };
  auto [eta, u] = sol.physical_record(grids.x_buoy, 0.0, grids.dt, grids.samples);
  return SemiInfiniteRecord{sol.runup(0.0, grids.dt, grids.samples),
                            series(sol.psi_series(0.0, tau)),
                            series(sol.psi_series(grids.sigma_buoy, tau)),
                            series(sol.phi_series(grids.sigma_buoy, tau)),
                            std::move(eta),
                            std::move(u),
                            sol.tail_ratio()};
}

namespace {

// Four-point Lagrange interpolation of a series at time t (zero before t0).
double sample_at(const TimeSeries& s, double t) {
  if (t < s.t0()) return 0.0;
  const double x = (t - s.t0()) / s.dt();
  const auto n = static_cast<long>(s.size());
  long i = static_cast<long>(std::floor(x));
  if (i >= n - 1) return s[static_cast<std::size_t>(n - 1)];
  const double fr = x - static_cast<double>(i);
  if (fr < 1e-12) return s[static_cast<std::size_t>(i)];
  long base = std::clamp(i - 1, 0L, std::max(0L, n - 4));
  const double y = x - static_cast<double>(base);
  double acc = 0.0;
  for (long a = 0; a < 4 && base + a < n; ++a) {
    double w = 1.0;
    for (long b = 0; b < 4; ++b) {
      if (b != a) w *= (y - static_cast<double>(b)) / static_cast<double>(a - b);
    }
    acc += w * s[static_cast<std::size_t>(base + a)];
  }
  return acc;
}

}  // namespace

HodographField fd_solve_ibvp(const TimeSeries& psi_b, double sigma_L, const FdGrid& grid) {
  if (!(sigma_L > 0.0)) throw ValidationError("fd_solve_ibvp: sigma_L must be positive");
  if (grid.sigma_cells < 2) throw ValidationError("fd_solve_ibvp: need at least 2 cells");
  if (!(grid.cfl > 0.0) || grid.cfl > 1.0) {
    throw ValidationError("fd_solve_ibvp: CFL number must lie in (0, 1], got " +
                          std::to_string(grid.cfl));
  }
  const std::size_t M = grid.sigma_cells;
  const double ds = sigma_L / static_cast<double>(M);
  const double dt_out = psi_b.dt();
  const auto sub = static_cast<std::size_t>(std::ceil(dt_out * std::sqrt(sigma_L) / (grid.cfl * ds)));
  const double dt = dt_out / static_cast<double>(sub);
  const double lam = dt / ds;
  const std::size_t n_out = psi_b.size();

  std::vector<double> psi(M + 1, 0.0), phi(M, 0.0), phi_next(M);
  if (grid.initial_psi) {
    for (std::size_t i = 0; i < M; ++i) psi[i] = grid.initial_psi(ds * static_cast<double>(i));
  }
  const double tau0 = psi_b.t0();
  psi[M] = sample_at(psi_b, tau0);
  // phi at dt/2 from phi(0) = 0
  for (std::size_t i = 0; i < M; ++i) phi[i] = -0.5 * lam * (psi[i + 1] - psi[i]);

  HodographField out = HodographField::zeros(sigma_L, M + 1, dt_out, n_out);
  out.tau0 = tau0;
  auto record = [&](std::size_t col, const std::vector<double>* phi_lo, const std::vector<double>* phi_hi) {
    const auto c = static_cast<Eigen::Index>(col);
    for (std::size_t i = 0; i <= M; ++i) out.psi(static_cast<Eigen::Index>(i), c) = psi[i];
    if (phi_lo == nullptr) return;  // phi(., tau0) = 0
    auto ph = [&](std::size_t h) { return 0.5 * ((*phi_lo)[h] + (*phi_hi)[h]); };
    out.phi(0, c) = 1.5 * ph(0) - 0.5 * ph(1);
    for (std::size_t i = 1; i < M; ++i) out.phi(static_cast<Eigen::Index>(i), c) = 0.5 * (ph(i - 1) + ph(i));
    out.phi(static_cast<Eigen::Index>(M), c) = 1.5 * ph(M - 1) - 0.5 * ph(M - 2);
  };
  record(0, nullptr, nullptr);

  const std::size_t steps = sub * (n_out - 1);
  for (std::size_t s = 0; s < steps; ++s) {
    // psi to level s+1 with phi at s+1/2
    const double psi0_new = psi[0] - dt * (1.5 * phi[0] - 0.5 * phi[1]);
    for (std::size_t i = 1; i < M; ++i) {
      const double flux_hi = ds * (static_cast<double>(i) + 0.5) * phi[i];
      const double flux_lo = ds * (static_cast<double>(i) - 0.5) * phi[i - 1];
      psi[i] -= lam * (flux_hi - flux_lo);
    }
    psi[0] = psi0_new;
    psi[M] = sample_at(psi_b, tau0 + dt * static_cast<double>(s + 1));
    // phi to level s+3/2
    for (std::size_t i = 0; i < M; ++i) phi_next[i] = phi[i] - lam * (psi[i + 1] - psi[i]);
    if ((s + 1) % sub == 0) record((s + 1) / sub, &phi, &phi_next);
    phi.swap(phi_next);
  }
  return out;
}

double fd_energy(const HodographField& field, std::size_t column) {
  const auto c = static_cast<Eigen::Index>(column);
  double e = 0.0;
  for (std::size_t i = 0; i < field.n_sigma(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double w = (i == 0 || i + 1 == field.n_sigma()) ? 0.5 : 1.0;
    e += w * (field.psi(r, c) * field.psi(r, c) + field.sigma(i) * field.phi(r, c) * field.phi(r, c));
  }
  return e * field.dsigma;
}

}  // namespace runup
