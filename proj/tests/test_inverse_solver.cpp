#include <doctest.h>

#include <cmath>

#include "reference.hpp"
#include "runup/error.hpp"
#include "runup/inverse_solver.hpp"
#include "runup/oracle.hpp"

using namespace runup;

namespace {

TimeSeries sample(double dt, std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(dt * static_cast<double>(i));
  return TimeSeries(0.0, dt, std::move(v));
}

double ramp(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double pulse(double t) { return 0.005 * std::exp(-(t - 10.0) * (t - 10.0) / 4.0) * ramp(t / 4.0); }

double other(double t) { return -0.003 * std::exp(-(t - 14.0) * (t - 14.0) / 6.0) * ramp(t / 6.0); }

}  // namespace

TEST_CASE("inversion_multiplier") {
  SUBCASE("s = 0") {
    CHECK(inversion_multiplier(build_modes(1.0, 500), cplx(0.0, 0.0)) == cplx(1.0, 0.0));
  }
  SUBCASE("one mode") {
    const ModeSet m = build_modes(0.7, 1);
    for (cplx s : {cplx(0.3, 1.0), cplx(2.0, -5.0), cplx(0.01, 40.0)}) {
      const cplx s2 = s * s;
      const cplx exact = 1.0 / (1.0 + s2 * m.b[0] / (m.a[0] + s2));
      const cplx got = inversion_multiplier(m, s);
      CHECK(std::abs(got - exact) <= 1e-14 * std::abs(exact));
    }
  }
  SUBCASE("500 modes against an extended-precision sum") {
    const ModeSet m = build_modes(1.0, 500);
    for (cplx s : {cplx(2.0, 0.0), cplx(0.3, 7.5), cplx(0.05, 123.0)}) {
      const cplx den = ref::multiplier_denominator(1.0, 500, s);
      const cplx got = inversion_multiplier(m, s);
      CHECK(std::abs(got - 1.0 / den) <= 1e-12 * std::abs(1.0 / den));
      CHECK(std::abs(got * den - 1.0) <= 1e-12);
    }
  }
  SUBCASE("the floor is counted") {
    const ModeSet m = build_modes(1.0, 50);
    MultiplierStats st;
    const cplx s(0.3, 7.5);
    const double den = std::abs(ref::multiplier_denominator(1.0, 50, s));
    const cplx got = inversion_multiplier(m, s, 10.0 * den, &st);
    CHECK(st.floor_hits == 1);
    CHECK(std::abs(got) == doctest::Approx(1.0 / (10.0 * den)).epsilon(1e-12));
    inversion_multiplier(m, s, 1e-10, &st);
    CHECK(st.floor_hits == 1);
  }
}

TEST_CASE("recover_boundary") {
  const double dt = 0.02;
  const std::size_t n = 1500;
  const ModeSet modes = build_modes(1.0, 500);
  const auto pb = sample(dt, n, pulse);
  const auto sh = shoreline_equation(pb, modes);

  SUBCASE("zero input") {
    const auto r = recover_boundary(TimeSeries::zeros(0.0, dt, n), modes);
    CHECK(r.psi_b.max_abs() == 0.0);
    CHECK(r.psi_b.size() == n);
  }
  SUBCASE("round trip through the shoreline equation") {
    const auto r = recover_boundary(sh, modes);
    CHECK(r.psi_b.size() == n);
    CHECK(r.psi_b.dt() == dt);
    CHECK(relative_l2(r.psi_b.span(), pb.span(), r.trusted_count) <= 0.01);
    CHECK(r.floor_hits == 0);
    CHECK(r.trusted_count == static_cast<std::size_t>(0.8 * n));
    CHECK(r.window >= 2.0 * dt * n);
    CHECK(r.bromwich_a == doctest::Approx(6.0 / r.window));
  }
  SUBCASE("recovered psi_b is compatible") {
    const auto r = recover_psi_b(sh, modes);
    CHECK(std::abs(r[0]) <= 1e-4 * pb.max_abs());
    CHECK(std::abs(r[1] - r[0]) / dt <= 1e-4);
  }
  SUBCASE("linearity") {
    const auto sh2 = shoreline_equation(sample(dt, n, other), modes);
    std::vector<double> mix(n);
    for (std::size_t k = 0; k < n; ++k) mix[k] = 2.0 * sh[k] + 0.5 * sh2[k];
    const auto r1 = recover_psi_b(sh, modes), r2 = recover_psi_b(sh2, modes);
    const auto rm = recover_psi_b(TimeSeries(0.0, dt, mix), modes);
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(rm[k] - (2.0 * r1[k] + 0.5 * r2[k])));
    CHECK(err <= 1e-10);
  }
  SUBCASE("input must start from rest") {
    auto bad = sh.values();
    for (auto& v : bad) v += 1e-3;
    CHECK_THROWS_AS(recover_boundary(TimeSeries(0.0, dt, bad), modes), ValidationError);
    CHECK_THROWS_AS(recover_boundary(TimeSeries(1.0, dt, sh.values()), modes), ValidationError);
  }
}

TEST_CASE("invert_runup on quiet records") {
  InversionConfig cfg;
  cfg.n_modes = 200;
  SUBCASE("exactly zero") {
    const auto inv = invert_runup(TimeSeries::zeros(0.0, 0.02, 600), cfg);
    for (const TimeSeries* s : {&inv.psi_b, &inv.phi_b, &inv.eta_b, &inv.u_b}) CHECK(s->max_abs() <= 1e-9);
    CHECK_FALSE(inv.diagnostics.breaking.breaking);
  }
  SUBCASE("sub-noise amplitude") {
    const auto R = sample(0.02, 600, [](double t) { return 1e-12 * std::sin(t) * std::sin(t); });
    const auto inv = invert_runup(R, cfg);
    for (const TimeSeries* s : {&inv.psi_b, &inv.phi_b, &inv.eta_b, &inv.u_b}) CHECK(s->max_abs() <= 1e-9);
  }
}

TEST_CASE("invert_runup against the semi-infinite solution") {
  for (char p : {'a', 'b', 'd'}) {
    CAPTURE(p);
    const SemiInfiniteRecord rec = semi_infinite_ivp(InitialProfile::reference(p));
    const RunupInversion inv = invert_runup(rec.runup);
    const std::size_t K = inv.diagnostics.trusted_count;
    CHECK(K > 0);
    CHECK(relative_l2(inv.psi_b.span(), rec.psi_b.span(), K) <= 0.02);
    CHECK(relative_l2(inv.phi_b.span(), rec.phi_b.span(), K) <= 0.02);
    const std::size_t Ke = std::min(K, inv.eta_b.size());
    CHECK(inv.eta_b.dt() == doctest::Approx(rec.eta_buoy.dt()));
    CHECK(std::abs(inv.eta_b.t0() - rec.eta_buoy.t0()) < 1e-6 * rec.eta_buoy.dt());
    CHECK(relative_l2(inv.eta_b.span(), rec.eta_buoy.span(), Ke) <= 0.02);
    CHECK(relative_l2(inv.u_b.span(), rec.u_buoy.span(), Ke) <= 0.02);
    CHECK(inv.diagnostics.truncation_change <= 1e-2);
    CHECK(inv.diagnostics.floor_hits == 0);
    CHECK_FALSE(inv.diagnostics.breaking.breaking);
  }
}

TEST_CASE("invert_runup failures") {
  SUBCASE("record not at rest") {
    const auto R = sample(0.02, 500, [](double t) { return 0.01 * std::cos(t); });
    CHECK_THROWS_AS(invert_runup(R), ValidationError);
  }
  SUBCASE("breaking at the shore carries its stage") {
    const auto R = sample(0.02, 800, [](double t) { return 2.0 * (1.0 - std::cos(t)); });
    try {
      invert_runup(R);
      FAIL("expected a NumericalError");
    } catch (const NumericalError& e) {
      CHECK_FALSE(e.stage().empty());
    }
  }
  SUBCASE("bad configuration") {
    InversionConfig cfg;
    cfg.n_modes = 0;
    CHECK_THROWS_AS(invert_runup(TimeSeries::zeros(0.0, 0.02, 100), cfg), ValidationError);
  }
}
