#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "runup/hodograph.hpp"
#include "runup/inverse_solver.hpp"
#include "runup/oracle.hpp"
#include "runup/stitching.hpp"

namespace runup {

enum class ScenarioKind { manufactured_ivp, boussinesq_stitch, lswe_stitch, roundtrip, benchmark };

ScenarioKind parse_scenario_kind(std::string_view name);
std::string to_string(ScenarioKind kind);

struct GridConfig {
  std::size_t tau_points = 1500;
  double dt = 0.02;
  std::size_t sigma_nodes = 300;
  std::size_t modes = 500;
};

// Smooth compatible boundary pulse for the roundtrip scenario:
// amplitude * exp(-(tau - center)^2 / width^2), multiplied by a C^2 ramp on
// [0, ramp] so psi_b(0) = psi_b'(0) = 0 hold exactly.
struct PulseConfig {
  double amplitude = 0.005;
  double center = 10.0;
  double width = 2.0;
  double ramp = 4.0;
};

struct BenchmarkConfig {
  std::vector<std::size_t> sizes{250, 500, 1000, 2000};
  std::size_t repetitions = 3;
  double modes_per_point = 1.0 / 3.0;
  double sigma_nodes_per_point = 0.2;
  double duration = 30.0;  // tau window shared by every size
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::manufactured_ivp;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  double noise = 0.0;  // std. dev. of additive noise on the input record, relative to its max

  Bathymetry bathymetry;
  GridConfig grid;
  InversionParams inversion;

  // manufactured_ivp
  InitialProfile profile = InitialProfile::reference('b');
  HankelQuadrature quadrature;

  // roundtrip
  PulseConfig pulse;

  // boussinesq_stitch
  SolitonPair solitons;
  std::optional<SolitonPair> guess;  // defaults to the generator perturbed by 10%
  double x_buoy = 0.0;
  bool via_runup = false;
  double comparison_speed = 1.0;

  // lswe_stitch
  TravellingWaveSpec wave;

  // both stitching kinds
  double t_event = -100.0;
  double crop_lo = 50.0;
  double crop_hi = 280.0;
  UniformGrid x_grid{-50.0, 0.05, 12001};

  BenchmarkConfig benchmark;

  // Defaults for the kind, e.g. L = 200 and a 400-unit window for the
  // stitching experiments.
  static ScenarioConfig defaults(ScenarioKind kind);
  // Parses JSON (comments allowed). Unknown keys and bad values raise
  // ValidationError naming the offending field path, e.g. "grid.modes".
  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig load(const std::filesystem::path& path);
  void validate() const;
};

struct ScenarioResult {
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
};

// Runs the scenario, writes one CSV per series plus summary.json and
// plot_manifest.json into output_dir, and returns the summary.
ScenarioResult run_scenario(const ScenarioConfig& config);

struct BenchmarkRow {
  std::size_t n;
  std::size_t modes;
  double seconds;  // minimum over repetitions
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  double slope = 0.0;  // least-squares slope of log(seconds) against log(n)
};

// Times invert_runup on a manufactured record for every size.
BenchmarkResult run_benchmark(const BenchmarkConfig& config, const Bathymetry& bathymetry = {});

}  // namespace runup
