#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "runup/csv.hpp"
#include "runup/error.hpp"
#include "runup/scenario.hpp"

using namespace runup;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RUNUP_CLI) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_csv(const fs::path& p, const std::string& header, double dt, std::size_t n,
               const std::function<double(double)>& f) {
  std::ofstream out(p);
  out.precision(17);
  out << header << '\n';
  for (std::size_t i = 0; i < n; ++i) out << dt * static_cast<double>(i) << ',' << f(dt * static_cast<double>(i)) << '\n';
}

json small_roundtrip(const std::string& out) {
  return {{"kind", "roundtrip"}, {"output_dir", out}, {"grid", {{"tau_points", 600}, {"dt", 0.05}, {"modes", 150}}}};
}

void check_message(const json& j, const std::string& field) {
  CAPTURE(j.dump());
  CHECK_THROWS_WITH_AS(ScenarioConfig::from_json(j), doctest::Contains(field.c_str()), ValidationError);
}

}  // namespace

TEST_CASE("config validation names the field") {
  json j = small_roundtrip("out/x");
  j["bogus"] = 1;
  check_message(j, "bogus: unknown field");
  j = small_roundtrip("out/x");
  j["grid"]["modes"] = -3;
  check_message(j, "grid.modes");
  j = small_roundtrip("out/x");
  j["grid"]["speed"] = 1.0;
  check_message(j, "grid.speed: unknown field");
  j = small_roundtrip("out/x");
  j["kind"] = "wavelet";
  check_message(j, "kind");
  check_message(json{{"output_dir", "x"}}, "kind: required");
  json b = {{"kind", "boussinesq_stitch"}, {"crop", {50.0}}};
  check_message(b, "crop");
  b["crop"] = {300.0, 200.0};
  check_message(b, "crop");
  b = {{"kind", "boussinesq_stitch"}, {"solitons", {{"eps1", 2}}}};
  check_message(b, "solitons.eps1");
  json l = {{"kind", "lswe_stitch"}, {"wave", {{"kind", "square"}}}};
  check_message(l, "wave.kind");
  json m = {{"kind", "manufactured_ivp"}, {"profile", {{"reference", "z"}}}};
  check_message(m, "profile.reference");
  m = {{"kind", "manufactured_ivp"}, {"profile", {{"kind", "gaussian"}, {"parameters", {1.0}}}}};
  check_message(m, "profile.parameters");
  check_message(json{{"kind", "roundtrip"}, {"seed", -4}}, "seed");
  check_message(json{{"kind", "roundtrip"}, {"noise", "loud"}}, "noise");
  check_message(json{{"kind", "benchmark"}, {"benchmark", {{"sizes", {100, 200}}}}}, "benchmark.sizes");
}

TEST_CASE("defaults and shipped configs are valid") {
  for (auto kind : {ScenarioKind::manufactured_ivp, ScenarioKind::boussinesq_stitch, ScenarioKind::lswe_stitch,
                    ScenarioKind::roundtrip, ScenarioKind::benchmark}) {
    CHECK_NOTHROW(ScenarioConfig::defaults(kind).validate());
    CHECK(parse_scenario_kind(to_string(kind)) == kind);
  }
  const auto b = ScenarioConfig::defaults(ScenarioKind::boussinesq_stitch);
  CHECK(b.bathymetry.L == 200.0);
  for (const auto& entry : fs::directory_iterator(RUNUP_CONFIG_DIR)) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(ScenarioConfig::load(entry.path()));
  }
}

TEST_CASE("config files may carry comments") {
  {
    std::ofstream out("commented.json");
    out << "// leading comment\n{\n  \"kind\": \"roundtrip\", /* inline */\n  \"seed\": 9\n}\n";
  }
  const auto c = ScenarioConfig::load("commented.json");
  CHECK(c.kind == ScenarioKind::roundtrip);
  CHECK(c.seed == 9);
  CHECK_THROWS_AS(ScenarioConfig::load("no_such_file.json"), ValidationError);
}

TEST_CASE("noisy runs are reproducible from the seed") {
  auto run = [](const std::string& dir, std::uint64_t seed) {
    json j = small_roundtrip(dir);
    j["noise"] = 1e-3;
    j["seed"] = seed;
    run_scenario(ScenarioConfig::from_json(j));
    return std::pair{slurp(fs::path(dir) / "psi_shore.csv"), slurp(fs::path(dir) / "psi_b.csv")};
  };
  const auto a = run("out/det_a", 7), b = run("out/det_b", 7), c = run("out/det_c", 8);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.first != c.first);
}

TEST_CASE("summary metrics can be recomputed from the CSVs") {
  json j = {{"kind", "manufactured_ivp"},
            {"output_dir", "out/metrics"},
            {"grid", {{"tau_points", 600}, {"dt", 0.05}, {"modes", 200}, {"sigma_nodes", 150}}},
            {"profile", {{"reference", "c"}}}};
  const ScenarioResult r = run_scenario(ScenarioConfig::from_json(j));
  const json& metrics = r.summary.at("metrics");
  CHECK(metrics.size() == 5);
  for (const auto& [name, m] : metrics.items()) {
    CAPTURE(name);
    const fs::path file = fs::path("out/metrics") / m.at("file").get<std::string>();
    const auto rows = m.at("rows").get<std::size_t>();
    const TimeSeries got = read_series_csv(file, 1), exact = read_series_csv(file, 2);
    CHECK(std::abs(relative_l2(got.span(), exact.span(), rows) - m.at("value").get<double>()) <= 1e-12);
    CHECK(m.at("value").get<double>() <= 0.02);
  }
  CHECK(fs::exists("out/metrics/summary.json"));
  const json manifest = json::parse(slurp("out/metrics/plot_manifest.json"));
  for (const auto& plot : manifest.at("plots")) CHECK(fs::exists(fs::path("out/metrics") / plot.at("file").get<std::string>()));
  for (const auto& f : r.summary.at("files")) CHECK(fs::exists(fs::path("out/metrics") / f.get<std::string>()));
}

TEST_CASE("a zero-amplitude scenario runs to zeros") {
  json j = small_roundtrip("out/zero");
  j["pulse"] = {{"amplitude", 0.0}};
  const auto r = run_scenario(ScenarioConfig::from_json(j));
  CHECK(r.summary.at("metrics").at("psi_b_rel_l2").at("value").get<double>() == 0.0);
  CHECK(read_series_csv("out/zero/psi_b.csv").max_abs() == 0.0);

  json m = {{"kind", "manufactured_ivp"},
            {"output_dir", "out/zero_ivp"},
            {"grid", {{"tau_points", 300}, {"dt", 0.05}, {"modes", 100}, {"sigma_nodes", 60}}},
            {"profile", {{"reference", "a"}, {"scale", 0.0}}}};
  run_scenario(ScenarioConfig::from_json(m));
  for (const char* f : {"psi_b.csv", "phi_b.csv", "eta_b.csv", "u_b.csv"}) {
    CAPTURE(f);
    CHECK(read_series_csv(fs::path("out/zero_ivp") / f).max_abs() <= 1e-9);
  }
}

TEST_CASE("run_benchmark") {
  BenchmarkConfig b;
  b.sizes = {64, 128, 256};
  b.repetitions = 1;
  const auto r = run_benchmark(b);
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) {
    CHECK(row.seconds > 0.0);
    CHECK(row.modes == static_cast<std::size_t>(std::lround(row.n / 3.0)));
  }
  CHECK(std::isfinite(r.slope));
}

TEST_CASE("command line exit codes") {
  fs::create_directories("out/cli");
  CHECK(run_cli("") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("invert does_not_exist.csv") == 2);
  {
    std::ofstream("out/cli/bad.json") << "{\"kind\": \"roundtrip\", \"grid\": {\"modes\": 0}}";
  }
  CHECK(run_cli("scenario out/cli/bad.json") == 2);
  CHECK(slurp("cli_stderr.txt").find("grid.modes") != std::string::npos);

  write_csv("out/cli/breaking.csv", "t,R", 0.01, 2000, [](double t) { return 2.0 * (1.0 - std::cos(t)); });
  CHECK(run_cli("invert out/cli/breaking.csv --modes 100 --out-dir out/cli/breaking") == 3);

  auto ramp = [](double s) {
    s = std::clamp(s, 0.0, 1.0);
    return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  };
  write_csv("out/cli/psi_b.csv", "tau,psi_b", 0.02, 1500,
            [&](double t) { return 0.005 * std::exp(-(t - 10.0) * (t - 10.0) / 4.0) * ramp(t / 4.0); });
  REQUIRE(run_cli("forward out/cli/psi_b.csv --out-dir out/cli/fwd") == 0);
  REQUIRE(run_cli("invert out/cli/fwd/runup.csv --out-dir out/cli/inv") == 0);
  const json summary = json::parse(slurp("out/cli/inv/summary.json"));
  const auto K = summary.at("trusted_count").get<std::size_t>();
  const TimeSeries input = read_series_csv("out/cli/psi_b.csv"), back = read_series_csv("out/cli/inv/psi_b.csv");
  REQUIRE(back.size() >= K);
  CHECK(back.dt() == doctest::Approx(input.dt()).epsilon(1e-6));
  CHECK(relative_l2(back.span(), input.span(), std::min(K, input.size())) <= 0.02);
}
