// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "runup/error.hpp"
#include "runup/forward_solver.hpp"
#include "runup/hodograph.hpp"
#include "runup/inverse_solver.hpp"
#include "runup/oracle.hpp"
#include "runup/scenario.hpp"

using namespace runup;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double ramp(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

TimeSeries sample(double dt, std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(dt * static_cast<double>(i));
  return TimeSeries(0.0, dt, std::move(v));
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fails]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

ScenarioConfig shipped(const std::string& name) {
  ScenarioConfig c = ScenarioConfig::load(std::string(RUNUP_CONFIG_DIR) + "/" + name + ".json");
  c.output_dir = "acceptance_out/" + name;
  return c;
}

Outcome manufactured() {
  Outcome o;
  for (char p : {'a', 'b', 'c', 'd'}) {
    const auto t0 = Clock::now();
    const SemiInfiniteRecord rec = semi_infinite_ivp(InitialProfile::reference(p));
    const double t_oracle = seconds_since(t0);
    const auto t1 = Clock::now();
    const RunupInversion inv = invert_runup(rec.runup);
    const double t_inv = seconds_since(t1);
    const std::size_t K = inv.diagnostics.trusted_count;
    const double e_psi = relative_l2(inv.psi_b.span(), rec.psi_b.span(), K);
    const double e_phi = relative_l2(inv.phi_b.span(), rec.phi_b.span(), K);
    const std::string tag = std::string("(") + p + ") ";
    o.require(e_psi <= 0.02 && e_phi <= 0.02, tag + fmt("psi_b %.2e", e_psi) + fmt(" phi_b %.2e", e_phi));
    o.require(t_oracle + t_inv <= 300.0, tag + fmt("%.1f s oracle + %.1f s inversion", t_oracle, t_inv));
  }
  return o;
}

Outcome forward_inverse() {
  Outcome o;
  const double dt = 0.02;
  const std::size_t n = 1500;
  const ModeSet modes = build_modes(1.0, 500);
  const std::vector<std::pair<std::string, std::function<double(double)>>> inputs{
      {"pulse", [](double t) { return 0.005 * std::exp(-(t - 10.0) * (t - 10.0) / 4.0) * ramp(t / 4.0); }},
      {"two bumps", [](double t) {
         return (0.004 * std::exp(-(t - 8.0) * (t - 8.0) / 2.0) - 0.002 * std::exp(-(t - 15.0) * (t - 15.0) / 3.0)) *
                ramp(t / 3.0);
       }},
      {"packet", [](double t) { return 0.003 * std::sin(2.0 * t) * std::exp(-(t - 12.0) * (t - 12.0) / 9.0) * ramp(t / 5.0); }}};
  const auto t0 = Clock::now();
  for (const auto& [name, f] : inputs) {
    const TimeSeries pb = sample(dt, n, f);
    const Recovery r = recover_boundary(shoreline_equation(pb, modes), modes);
    const double e = relative_l2(r.psi_b.span(), pb.span(), r.trusted_count);
    o.require(e <= 0.01, name + fmt(" %.2e", e));
  }
  const double t = seconds_since(t0);
  o.require(t <= 60.0, fmt("%.1f s", t));
  return o;
}

Outcome boussinesq() {
  Outcome o;
  const json s = run_scenario(shipped("boussinesq")).summary;
  const auto& m = s.at("metrics");
  for (int i = 0; i < 2; ++i) {
    const double d = m.at("peak_offset")[static_cast<std::size_t>(i)].get<double>();
    o.require(d <= 0.2, fmt("|dx%.0f| = ", i + 1.0) + fmt("%.2e", d));
  }
  double worst = 0.0;
  for (const auto& [k, v] : m.at("param_rel_error").items()) worst = std::max(worst, v.get<double>());
  o.require(worst <= 0.02, fmt("params within %.2e", worst));
  const auto& peaks = s.at("peaks");
  o.detail += fmt("; exact x = %.4f, ", peaks.at("exact")[0].get<double>()) +
              fmt("%.4f", peaks.at("exact")[1].get<double>()) +
              fmt(", recovered %.4f, ", peaks.at("recovered")[0].get<double>()) +
              fmt("%.4f", peaks.at("recovered")[1].get<double>());
  return o;
}

Outcome lswe() {
  Outcome o;
  for (const char* name : {"lswe_soliton", "lswe_nwave"}) {
    const json s = run_scenario(shipped(name)).summary;
    const auto& m = s.at("metrics");
    double worst = 0.0;
    for (const auto& v : m.at("feature_offset")) worst = std::max(worst, v.get<double>());
    const double l2 = m.at("cropped_rel_l2").at("value").get<double>();
    o.require(worst <= 0.2, std::string(name) + fmt(" offsets <= %.2e", worst));
    o.require(l2 <= 0.02, std::string(name) + fmt(" cropped L2 %.2e", l2));
  }
  return o;
}

Outcome complexity() {
  Outcome o;
  const ScenarioConfig c = shipped("benchmark");
  const BenchmarkResult b = run_benchmark(c.benchmark, c.bathymetry);
  std::string rows;
  for (const auto& r : b.rows) rows += fmt(" %.0f:", static_cast<double>(r.n)) + fmt("%.3gs", r.seconds);
  o.require(b.slope >= 2.4 && b.slope <= 3.3, fmt("slope %.2f", b.slope) + " (" + rows.substr(1) + ")");
  const SemiInfiniteRecord rec = semi_infinite_ivp(InitialProfile::reference('b'));
  const auto t0 = Clock::now();
  InversionConfig cfg;
  cfg.n_modes = 500;
  invert_runup(rec.runup, cfg);
  const double t = seconds_since(t0);
  o.require(t <= 300.0, fmt("N = 1500, 500 modes in %.2f s", t));
  return o;
}

Outcome series_constants() {
  Outcome o;
  for (double sigma_L : {1.0, 200.0}) {
    const ModeSet m = build_modes(sigma_L, 500);
    const double a_ref = std::numbers::pi * std::numbers::pi / (4.0 * sigma_L);
    const double b_ref = std::sqrt(2.0 * std::numbers::pi);
    double a_lo = 1e300, a_hi = 0.0, b_lo = 1e300, b_hi = 0.0;
    bool alternates = true;
    for (std::size_t i = 4; i < 500; ++i) {
      const double n = static_cast<double>(i + 1);
      a_lo = std::min(a_lo, m.a[i] / (n * n) / a_ref);
      a_hi = std::max(a_hi, m.a[i] / (n * n) / a_ref);
      b_lo = std::min(b_lo, std::abs(m.b[i]) * std::sqrt(n) / b_ref);
      b_hi = std::max(b_hi, std::abs(m.b[i]) * std::sqrt(n) / b_ref);
    }
    for (std::size_t i = 1; i < 500; ++i) alternates = alternates && m.b[i] * m.b[i - 1] < 0.0;
    double partial = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < 500; ++i) {
      partial += m.b[i];
      mean += partial;
    }
    mean /= 500.0;
    const std::string tag = fmt("sigma_L %g: ", sigma_L);
    o.require(a_lo >= 0.5 && a_hi <= 1.5, tag + fmt("a_n ratio [%.3f, %.3f]", a_lo, a_hi));
    o.require(b_lo >= 0.5 && b_hi <= 1.5, tag + fmt("|b_n| ratio [%.3f, %.3f]", b_lo, b_hi));
    o.require(alternates, tag + "b_n alternates");
    o.require(std::abs(mean + 1.0) <= 0.05, tag + fmt("Cesaro mean %.4f", mean));
  }
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const double dt = 0.02;
  const TimeSeries pb = sample(dt, 1501, [](double t) { return 0.005 * std::exp(-(t - 10.0) * (t - 10.0) / 4.0) * ramp(t / 4.0); });
  FieldGrid g;
  g.sigma_nodes = 401;
  const HodographField spectral = reconstruct_field(duhamel_coefficients(pb, build_modes(1.0, 500)), pb, g);
  const double scale = spectral.psi.cwiseAbs().maxCoeff();
  double prev = 0.0;
  for (std::size_t cells : {50u, 100u, 200u, 400u}) {
    FdGrid fg;
    fg.sigma_cells = cells;
    const HodographField fd = fd_solve_ibvp(pb, 1.0, fg);
    const auto stride = static_cast<Eigen::Index>(400 / cells);
    double err = 0.0;
    for (Eigen::Index i = 0; i < fd.psi.rows(); ++i) {
      err = std::max(err, (fd.psi.row(i) - spectral.psi.row(stride * i)).cwiseAbs().maxCoeff());
    }
    const double rel = err / scale;
    std::string what = fmt("%.0f cells: ", static_cast<double>(cells)) + fmt("%.2e", rel);
    if (prev > 0.0) what += fmt(" (ratio %.2f)", prev / err);
    o.require(rel <= 1e-2 && (prev == 0.0 || prev / err >= 3.0), what);
    prev = err;
  }
  return o;
}

Outcome trivial() {
  Outcome o;
  const RunupInversion inv = invert_runup(TimeSeries::zeros(0.0, 0.02, 1500));
  double worst = 0.0;
  for (const TimeSeries* s : {&inv.psi_sh, &inv.psi_b, &inv.phi_b, &inv.eta_b, &inv.u_b}) worst = std::max(worst, s->max_abs());
  worst = std::max({worst, inv.field.psi.cwiseAbs().maxCoeff(), inv.field.phi.cwiseAbs().maxCoeff()});
  o.require(worst <= 1e-9, fmt("zero record -> max output %.1e", worst));
  const BreakingReport rep = breaking_diagnostic(HodographField::zeros(1.05, 300, 0.02, 1500));
  o.require(rep.min_jacobian == 1.0 && !rep.breaking, fmt("zero field Jacobian %.17g", rep.min_jacobian));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"manufactured-solution round trip", manufactured},
      {"forward-inverse identity", forward_inverse},
      {"Boussinesq stitching", boussinesq},
      {"LSWE stitching", lswe},
      {"complexity", complexity},
      {"series constants", series_constants},
      {"oracle equivalence", oracle_equivalence},
      {"trivial stability", trivial}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
