#include <doctest.h>

#include <cmath>
#include <random>

#include "runup/error.hpp"
#include "runup/hodograph.hpp"
#include "runup/numerics.hpp"
#include "runup/oracle.hpp"

using namespace runup;

namespace {

void check_state(const HodographState& h, double sigma, double tau, double psi, double phi) {
  CHECK(h.sigma == doctest::Approx(sigma).epsilon(1e-15));
  CHECK(h.tau == doctest::Approx(tau).epsilon(1e-15));
  CHECK(h.psi == doctest::Approx(psi).epsilon(1e-15));
  CHECK(h.phi == doctest::Approx(phi).epsilon(1e-15));
}

TimeSeries series(double t0, double dt, std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(t0 + dt * static_cast<double>(i));
  return TimeSeries(t0, dt, std::move(v));
}

// Solves tau = t + eps cos t for t.
double shore_time(double tau, double eps) {
  double t = tau;
  for (int k = 0; k < 50; ++k) t -= (t + eps * std::cos(t) - tau) / (1.0 - eps * std::sin(t));
  return t;
}

}  // namespace

TEST_CASE("cgt_forward on still and moving water") {
  check_state(cgt_forward({1.0, 3.0, 0.0, 0.0}), 1.0, 3.0, 0.0, 0.0);
  check_state(cgt_forward({1.0, 3.0, 0.1, 0.2}), 1.1, 2.8, 0.12, 0.2);
  check_state(cgt_forward({0.0, 0.0, 0.05, -0.1}), 0.05, 0.1, 0.055, -0.1);
  CHECK_THROWS_AS(cgt_forward({0.0, 0.0, -0.01, 0.0}), ValidationError);
}

TEST_CASE("the algebraic inverse undoes cgt_forward") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double x = 2.5 + 2.0 * U(rng);
    const PhysicalState p{x, 10.0 * U(rng), 0.5 * U(rng), 0.5 * U(rng)};
    const PhysicalState q = cgt_inverse(cgt_forward(p));
    worst = std::max({worst, std::abs(q.x - p.x), std::abs(q.t - p.t), std::abs(q.eta - p.eta),
                      std::abs(q.u - p.u)});
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("shore_to_hodograph") {
  SUBCASE("zero record") {
    const auto psi = shore_to_hodograph(TimeSeries::zeros(0.0, 0.02, 200));
    CHECK(psi.max_abs() == 0.0);
    CHECK(psi.t0() == 0.0);
  }
  SUBCASE("R = eps sin t, pointwise") {
    const double eps = 1e-3;
    const auto R = series(0.0, 0.01, 3001, [&](double t) { return eps * std::sin(t); });
    const auto psi = shore_to_hodograph(R);
    double worst = 0.0, smallness = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
      const double t = shore_time(psi.time(k), eps);
      const double exact = eps * std::sin(t) + 0.5 * eps * eps * std::cos(t) * std::cos(t);
      worst = std::max(worst, std::abs(psi[k] - exact));
      smallness = std::max(smallness, std::abs(psi[k] - eps * std::sin(t)));
    }
    CHECK(worst < 1e-11);
    CHECK(smallness <= 0.5 * eps * eps * (1.0 + 1e-6));
  }
  SUBCASE("a start at rest is pinned") {
    const auto R = series(0.0, 0.02, 1000, [](double t) { return 0.01 * t * t * std::exp(-t); });
    const auto psi = shore_to_hodograph(R);
    CHECK(psi.t0() == 0.0);
    CHECK(psi[0] == 0.0);
  }
  SUBCASE("breaking at the shore") {
    const auto R = series(0.0, 0.01, 2000, [](double t) { return 2.0 * (1.0 - std::cos(t)); });
    CHECK_THROWS_AS(shore_to_hodograph(R), NumericalError);
  }
  SUBCASE("hodograph_to_shore inverts it") {
    const auto R = series(0.0, 0.01, 3000, [](double t) { return 0.02 * t * t * std::exp(-0.5 * t) * std::sin(t); });
    const auto psi = shore_to_hodograph(R);
    // at the shore u = -R', and phi = u, so phi(0, tau) = -R'(t(tau))
    std::vector<double> tt(R.size()), ph(R.size());
    const auto rp = gradient(R.span(), R.dt(), 4);
    for (std::size_t i = 0; i < R.size(); ++i) {
      tt[i] = R.time(i) + rp[i];
      ph[i] = -rp[i];
    }
    std::vector<double> grid(psi.size());
    for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = psi.time(k);
    tt[0] = 0.0;
    const TimeSeries phi(psi.t0(), psi.dt(), pchip(tt, ph, grid));
    const auto back = hodograph_to_shore(psi, phi);
    double worst = 0.0;
    for (std::size_t k = 0; k < std::min(back.size(), R.size()) - 5; ++k) {
      worst = std::max(worst, std::abs(back[k] - R[k]));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("shore_to_hodograph against the semi-infinite solution, profile (c)") {
  const SemiInfiniteSolution sol(InitialProfile::reference('c'));
  const TimeSeries R = sol.runup(0.0, 0.02, 1500);
  const TimeSeries psi = shore_to_hodograph(R);
  std::vector<double> tau(psi.size());
  for (std::size_t k = 0; k < tau.size(); ++k) tau[k] = psi.time(k);
  const auto exact = sol.psi_series(0.0, tau);
  double worst = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) worst = std::max(worst, std::abs(psi[k] - exact[k]));
  CHECK(worst <= 1e-6);
}

TEST_CASE("inverse_cgt_on_gamma") {
  Bathymetry b;
  b.L = b.sigma_L = 1.0;
  SUBCASE("still water") {
    const auto f = HodographField::zeros(2.0, 201, 0.05, 100);
    const auto rec = inverse_cgt_on_gamma(f, b);
    CHECK(rec.eta_b.max_abs() == 0.0);
    CHECK(rec.u_b.max_abs() == 0.0);
    CHECK(rec.eta_b.t0() == 0.0);
    CHECK(rec.eta_b.dt() == 0.05);
    for (std::size_t j = 0; j < rec.sigma_star.size(); ++j) CHECK(rec.sigma_star[j] == doctest::Approx(1.0));
  }
  SUBCASE("constant velocity fixed point") {
    const double c = 0.1;
    auto f = HodographField::zeros(2.0, 201, 0.05, 100);
    f.phi.setConstant(c);
    f.psi.setConstant(0.5 * c * c);
    const auto rec = inverse_cgt_on_gamma(f, b);
    CHECK(rec.eta_b.t0() == doctest::Approx(c));
    for (std::size_t j = 0; j < rec.eta_b.size(); ++j) {
      CHECK(std::abs(rec.eta_b[j]) < 1e-15);
      CHECK(rec.u_b[j] == doctest::Approx(c).epsilon(1e-14));
    }
    for (std::size_t j = 0; j < rec.sigma_star.size(); ++j) CHECK(rec.sigma_star[j] == doctest::Approx(1.0));
  }
  SUBCASE("Gamma stays within one grid cell of the defining relation") {
    auto f = HodographField::zeros(1.5, 151, 0.05, 400);
    for (Eigen::Index i = 0; i < f.psi.rows(); ++i) {
      for (Eigen::Index j = 0; j < f.psi.cols(); ++j) {
        const double s = f.sigma(static_cast<std::size_t>(i)), t = f.tau(static_cast<std::size_t>(j));
        f.psi(i, j) = 0.02 * std::sin(t - 2.0 * s) * std::exp(-0.05 * t);
        f.phi(i, j) = 0.03 * std::cos(t + s);
      }
    }
    const auto rec = inverse_cgt_on_gamma(f, b);
    for (std::size_t j = 0; j < f.n_tau(); ++j) {
      const double s = rec.sigma_star[j], t = f.tau(j);
      const double psi = 0.02 * std::sin(t - 2.0 * s) * std::exp(-0.05 * t);
      const double phi = 0.03 * std::cos(t + s);
      CHECK(std::abs(s - b.L - psi + 0.5 * phi * phi) <= f.dsigma);
    }
  }
  SUBCASE("Gamma leaving the grid") {
    const auto f = HodographField::zeros(0.8, 81, 0.05, 100);
    CHECK_THROWS_AS(inverse_cgt_on_gamma(f, b), NumericalError);
  }
}

TEST_CASE("breaking_diagnostic") {
  SUBCASE("zero field is the identity map") {
    const auto rep = breaking_diagnostic(HodographField::zeros(1.0, 51, 0.1, 60));
    CHECK(rep.min_jacobian == 1.0);
    CHECK(rep.min_abs_jacobian == 1.0);
    CHECK_FALSE(rep.breaking);
  }
  SUBCASE("reference profiles are far from breaking, and x200 breaks") {
    for (char p : {'a', 'b', 'c', 'd'}) {
      const SemiInfiniteSolution sol(InitialProfile::reference(p));
      const auto f = sol.field(1.0, 101, 0.02, 1500);
      const auto rep = breaking_diagnostic(f);
      CHECK_FALSE(rep.breaking);
      CHECK(rep.min_jacobian > 0.1);
      auto big = f;
      big.psi *= 200.0;
      big.phi *= 200.0;
      CHECK(breaking_diagnostic(big).breaking);
    }
  }
}

TEST_CASE("dimensionalisation") {
  Bathymetry b;
  b.H0 = 5.0;
  CHECK(dimensionalize_nswe(200.0, Quantity::x, b) == doctest::Approx(1000.0));
  CHECK(dimensionalize_nswe(1.0, Quantity::eta, b) == doctest::Approx(5.0));
  CHECK(dimensionalize_nswe(1.0, Quantity::t, Bathymetry{}) == doctest::Approx(1.0));
  b.g = 9.81;
  CHECK(dimensionalize_nswe(2.0, Quantity::u, b) == doctest::Approx(2.0 * std::sqrt(5.0 * 9.81)));
  CHECK(dimensionalize_boussinesq(1.0, Quantity::eta, 5.0, 9.81) == doctest::Approx(20.0));
  CHECK(dimensionalize_boussinesq(std::sqrt(3.0), Quantity::x, 1.0, 9.81) == doctest::Approx(1.0));
  CHECK(dimensionalize_boussinesq(1.0, Quantity::t, 3.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(dimensionalize_boussinesq(1.0, Quantity::u, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(parse_quantity("depth"), ValidationError);
  CHECK(parse_quantity("eta") == Quantity::eta);
}

TEST_CASE("bathymetry validation") {
  Bathymetry b;
  b.alpha = 0.0;
  CHECK_THROWS_WITH_AS(b.validate(), doctest::Contains("bathymetry.alpha"), ValidationError);
}
