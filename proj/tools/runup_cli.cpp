#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "runup/csv.hpp"
#include "runup/error.hpp"
#include "runup/forward_solver.hpp"
#include "runup/inverse_solver.hpp"
#include "runup/scenario.hpp"
#include "runup/stitching.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace runup;

namespace {

constexpr int kValidation = 2;
constexpr int kNumerical = 3;

struct Common {
  std::optional<double> sigma_l;
  std::size_t modes = 500;
  std::size_t tau_points = 1500;
  std::optional<double> bromwich_a;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  CLI::Option* modes_opt = nullptr;
  CLI::Option* tau_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--sigma-l", c.sigma_l, "hodograph coordinate of the buoy (also sets L)")
      ->check(CLI::PositiveNumber);
  c.modes_opt = app->add_option("--modes", c.modes, "Fourier-Bessel modes")->capture_default_str()
                    ->check(CLI::PositiveNumber);
  c.tau_opt = app->add_option("--tau-points", c.tau_points,
                              "resample the input to this many points when given explicitly")
                  ->capture_default_str()
                  ->check(CLI::Range(16, 1 << 24));
  app->add_option("--bromwich-a", c.bromwich_a, "Bromwich abscissa (default 6 / window)")
      ->check(CLI::PositiveNumber);
  c.out_opt = app->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
  c.seed_opt = app->add_option("--seed", c.seed, "seed for generated noise")->capture_default_str();
}

// The input resampled onto `points` samples over the same span when the
// option was given; otherwise unchanged.
TimeSeries maybe_resample(const TimeSeries& s, const Common& c) {
  if (c.tau_opt->count() == 0 || c.tau_points == s.size()) return s;
  std::vector<double> x(s.size()), xq(c.tau_points);
  for (std::size_t i = 0; i < s.size(); ++i) x[i] = s.time(i);
  const double dt = (s.end_time() - s.t0()) / static_cast<double>(c.tau_points - 1);
  for (std::size_t i = 0; i < xq.size(); ++i) xq[i] = s.t0() + dt * static_cast<double>(i);
  return TimeSeries(s.t0(), dt, pchip(x, s.values(), xq));
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_invert(const std::string& input, const Common& c) {
  const TimeSeries R = maybe_resample(read_series_csv(input), c);
  InversionConfig cfg;
  if (c.sigma_l) cfg.bathymetry.L = cfg.bathymetry.sigma_L = *c.sigma_l;
  cfg.n_modes = c.modes;
  cfg.laplace.bromwich_a = c.bromwich_a;
  const RunupInversion inv = invert_runup(R, cfg);
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  write_series_csv(dir / "psi_shore.csv", "tau", "psi_shore", inv.psi_sh);
  write_series_csv(dir / "psi_b.csv", "tau", "psi_b", inv.psi_b);
  write_series_csv(dir / "phi_b.csv", "tau", "phi_b", inv.phi_b);
  write_series_csv(dir / "eta_b.csv", "t", "eta_b", inv.eta_b);
  write_series_csv(dir / "u_b.csv", "t", "u_b", inv.u_b);
  const auto& d = inv.diagnostics;
  json summary = {{"samples", R.size()},
                  {"modes", c.modes},
                  {"trusted_count", d.trusted_count},
                  {"min_jacobian", d.breaking.min_jacobian},
                  {"floor_hits", d.floor_hits},
                  {"imag_residue", d.imag_residue},
                  {"truncation_change", d.truncation_change},
                  {"gamma_boundary_hits", d.gamma_boundary_hits},
                  {"bromwich_a", d.bromwich_a},
                  {"window", d.window}};
  std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
  print(summary);
  return 0;
}

int cmd_forward(const std::string& input, const Common& c) {
  const TimeSeries psi_b = maybe_resample(read_series_csv(input), c);
  const ModeSet modes = build_modes(c.sigma_l.value_or(1.0), c.modes);
  const ModeSet filled = duhamel_coefficients(psi_b, modes);
  const ShorelineFields sh = shoreline_fields(filled, psi_b);
  const TimeSeries R = hodograph_to_shore(sh.psi, sh.phi);
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  write_series_csv(dir / "psi_shore.csv", "tau", "psi_shore", sh.psi);
  write_series_csv(dir / "phi_shore.csv", "tau", "phi_shore", sh.phi);
  write_series_csv(dir / "runup.csv", "t", "R", R);
  print({{"samples", psi_b.size()}, {"modes", c.modes}, {"max_runup", R.max_abs()}});
  return 0;
}

int cmd_scenario(const std::string& path, const Common& c) {
  ScenarioConfig cfg = ScenarioConfig::load(path);
  if (c.sigma_l) cfg.bathymetry.L = cfg.bathymetry.sigma_L = *c.sigma_l;
  if (c.modes_opt->count()) cfg.grid.modes = c.modes;
  if (c.tau_opt->count()) {
    const double T = cfg.grid.dt * static_cast<double>(cfg.grid.tau_points);
    cfg.grid.tau_points = c.tau_points;
    cfg.grid.dt = T / static_cast<double>(c.tau_points);
  }
  if (c.bromwich_a) cfg.inversion.bromwich_a = c.bromwich_a;
  if (c.out_opt->count()) cfg.output_dir = c.out_dir;
  if (c.seed_opt->count()) cfg.seed = c.seed;
  const ScenarioResult r = run_scenario(cfg);
  print(r.summary);
  return 0;
}

int cmd_benchmark(const std::vector<std::size_t>& sizes, std::size_t reps, double per_point,
                  const Common& c) {
  BenchmarkConfig b;
  b.sizes = sizes;
  b.repetitions = reps;
  b.modes_per_point = per_point;
  Bathymetry bathy;
  if (c.sigma_l) bathy.L = bathy.sigma_L = *c.sigma_l;
  const BenchmarkResult r = run_benchmark(b, bathy);
  std::vector<double> n, m, s;
  json rows = json::array();
  for (const auto& row : r.rows) {
    n.push_back(static_cast<double>(row.n));
    m.push_back(static_cast<double>(row.modes));
    s.push_back(row.seconds);
    rows.push_back({{"n", row.n}, {"modes", row.modes}, {"seconds", row.seconds}});
  }
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  write_table_csv(dir / "benchmark.csv", {"n", "modes", "seconds"}, {n, m, s});
  print({{"rows", rows}, {"slope", r.slope}});
  return 0;
}

int cmd_fit(const std::string& input, const SolitonPair& guess, double x_buoy, double t_event,
            std::size_t taper, const Common& c) {
  const TimeSeries data = read_series_csv(input);
  const SolitonFit f = fit_two_soliton(data, x_buoy, guess, taper);
  const auto x = backtrack_solitons(f.params, t_event);
  json out = {{"q1", f.params.q1},
              {"q2", f.params.q2},
              {"t1", f.params.t1},
              {"t2", f.params.t2},
              {"eps1", f.params.eps1},
              {"eps2", f.params.eps2},
              {"residual_norm", f.fit.residual_norm},
              {"iterations", f.fit.iterations},
              {"converged", f.fit.converged},
              {"positions", {x[0], x[1]}},
              {"t_event", t_event}};
  if (c.out_opt->count()) {
    fs::create_directories(c.out_dir);
    std::ofstream(fs::path(c.out_dir) / "fit.json") << out.dump(2) << '\n';
  }
  print(out);
  if (!f.fit.converged) {
    std::cerr << "error: soliton fit did not converge\n";
    return kNumerical;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recover buoy boundary data from shoreline run-up records"};
  app.require_subcommand(1);
  Common common;

  std::string input;
  auto* invert = app.add_subcommand("invert", "run-up CSV (t,R) -> boundary CSVs");
  invert->add_option("input", input, "run-up CSV")->required()->check(CLI::ExistingFile);
  add_common(invert, common);

  auto* forward = app.add_subcommand("forward", "psi_b CSV -> shoreline CSVs");
  forward->add_option("input", input, "boundary psi CSV")->required()->check(CLI::ExistingFile);
  add_common(forward, common);

  auto* scenario = app.add_subcommand("scenario", "run a scenario config file");
  scenario->add_option("config", input, "JSON config (comments allowed)")->required()->check(CLI::ExistingFile);
  add_common(scenario, common);

  std::vector<std::size_t> sizes{250, 500, 1000, 2000};
  std::size_t reps = 3;
  double per_point = 1.0 / 3.0;
  auto* bench = app.add_subcommand("benchmark", "time invert_runup over record lengths");
  bench->add_option("--sizes", sizes, "record lengths")->delimiter(',')->capture_default_str();
  bench->add_option("--reps", reps, "repetitions per size (minimum is kept)")->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--modes-per-point", per_point, "modes = this * N")->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_common(bench, common);

  SolitonPair guess;
  double x_buoy = 0.0, t_event = -100.0;
  std::size_t taper = 5;
  auto* fit = app.add_subcommand("fit-solitons", "fit a two-soliton pair to a cropped CSV");
  fit->add_option("input", input, "cropped psi_b CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--q1", guess.q1)->capture_default_str();
  fit->add_option("--q2", guess.q2)->capture_default_str();
  fit->add_option("--t1", guess.t1)->capture_default_str();
  fit->add_option("--t2", guess.t2)->capture_default_str();
  fit->add_option("--eps1", guess.eps1)->capture_default_str()->check(CLI::IsMember({-1, 1}));
  fit->add_option("--eps2", guess.eps2)->capture_default_str()->check(CLI::IsMember({-1, 1}));
  fit->add_option("--x-buoy", x_buoy)->capture_default_str();
  fit->add_option("--t-event", t_event)->capture_default_str();
  fit->add_option("--taper", taper, "taper length used by the crop")->capture_default_str();
  add_common(fit, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  try {
    if (*invert) return cmd_invert(input, common);
    if (*forward) return cmd_forward(input, common);
    if (*scenario) return cmd_scenario(input, common);
    if (*bench) return cmd_benchmark(sizes, reps, per_point, common);
    if (*fit) return cmd_fit(input, guess, x_buoy, t_event, taper, common);
  } catch (const NumericalError& e) {
    std::cerr << "error";
    if (!e.stage().empty()) std::cerr << " [" << e.stage() << "]";
    std::cerr << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error";
    if (!e.stage().empty()) std::cerr << " [" << e.stage() << "]";
    std::cerr << ": " << e.what() << '\n';
    return kValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return 0;
}
