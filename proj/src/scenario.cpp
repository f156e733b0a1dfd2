#include "runup/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "runup/csv.hpp"
#include "runup/error.hpp"
#include "runup/forward_solver.hpp"

namespace runup {

using nlohmann::json;

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "manufactured_ivp") return ScenarioKind::manufactured_ivp;
  if (name == "boussinesq_stitch") return ScenarioKind::boussinesq_stitch;
  if (name == "lswe_stitch") return ScenarioKind::lswe_stitch;
  if (name == "roundtrip") return ScenarioKind::roundtrip;
  if (name == "benchmark") return ScenarioKind::benchmark;
  throw ValidationError("kind: unknown scenario kind '" + std::string(name) + "'");
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::manufactured_ivp: return "manufactured_ivp";
    case ScenarioKind::boussinesq_stitch: return "boussinesq_stitch";
    case ScenarioKind::lswe_stitch: return "lswe_stitch";
    case ScenarioKind::roundtrip: return "roundtrip";
    case ScenarioKind::benchmark: return "benchmark";
  }
  return "unknown";
}

namespace {

// A JSON object together with its path from the document root, so every
// error can name the field it is about.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items()) {
      if (!ok.count(k)) throw ValidationError(join(k) + ": unknown field");
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  Section section(const char* key) const { return Section(j_.at(key), join(key)); }
  const json& raw(const char* key) const { return j_.at(key); }
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void number(const char* key, double& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ValidationError(join(key) + ": expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ValidationError(join(key) + ": must be finite");
  }

  void count(const char* key, std::size_t& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      throw ValidationError(join(key) + ": expected a positive integer");
    }
    out = v.get<std::size_t>();
  }

  void flag(const char* key, bool& out) const {
    if (!has(key)) return;
    if (!j_.at(key).is_boolean()) throw ValidationError(join(key) + ": expected true or false");
    out = j_.at(key).get<bool>();
  }

  void text(const char* key, std::string& out) const {
    if (!has(key)) return;
    if (!j_.at(key).is_string()) throw ValidationError(join(key) + ": expected a string");
    out = j_.at(key).get<std::string>();
  }

  void numbers(const char* key, std::vector<double>& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ValidationError(join(key) + ": expected an array of numbers");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number()) throw ValidationError(join(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError((path_.empty() ? std::string("config") : path_) + ": " + what);
  }

 private:
  const json& j_;
  std::string path_;
};

// Re-throws a ValidationError from a component validator with a field path.
template <class Fn>
void checked(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void read_solitons(const Section& s, SolitonPair& p) {
  s.allow({"q1", "q2", "t1", "t2", "eps1", "eps2"});
  s.number("q1", p.q1);
  s.number("q2", p.q2);
  s.number("t1", p.t1);
  s.number("t2", p.t2);
  for (auto [key, dst] : {std::pair{"eps1", &p.eps1}, std::pair{"eps2", &p.eps2}}) {
    if (!s.has(key)) continue;
    const json& v = s.raw(key);
    if (!v.is_number_integer() || std::abs(v.get<int>()) != 1) {
      throw ValidationError(s.join(key) + ": expected -1 or 1");
    }
    *dst = v.get<int>();
  }
}

InitialProfile read_profile(const Section& s) {
  s.allow({"reference", "kind", "parameters", "scale"});
  double scale = 1.0;
  s.number("scale", scale);
  if (s.has("reference")) {
    if (s.has("kind")) s.fail("give either reference or kind, not both");
    std::string name;
    s.text("reference", name);
    if (name.size() != 1) throw ValidationError(s.join("reference") + ": expected one of a, b, c, d");
    InitialProfile p = InitialProfile::reference('a');
    checked(s.join("reference"), [&] { p = InitialProfile::reference(name[0]); });
    return p.scaled(scale);
  }
  std::string kind;
  s.text("kind", kind);
  if (kind.empty()) s.fail("needs reference or kind");
  std::vector<double> params;
  s.numbers("parameters", params);
  ProfileKind pk{};
  checked(s.join("kind"), [&] { pk = parse_profile_kind(kind); });
  if (pk == ProfileKind::custom) throw ValidationError(s.join("kind") + ": custom profiles need code");
  InitialProfile p = InitialProfile::reference('a');
  checked(s.join("parameters"), [&] { p = InitialProfile(pk, params); });
  return p.scaled(scale);
}

void read_wave(const Section& s, TravellingWaveSpec& w) {
  s.allow({"kind", "c", "width", "offsets", "amplitudes"});
  if (s.has("kind")) {
    std::string k;
    s.text("kind", k);
    WaveKind kind;
    if (k == "soliton") {
      kind = WaveKind::soliton;
    } else if (k == "n_wave") {
      kind = WaveKind::n_wave;
    } else {
      throw ValidationError(s.join("kind") + ": expected soliton or n_wave");
    }
    w = TravellingWaveSpec::make(kind, w.c, w.width);
  }
  s.number("c", w.c);
  s.number("width", w.width);
  s.numbers("offsets", w.offsets);
  s.numbers("amplitudes", w.amplitudes);
}

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

TimeSeries pulse_series(const PulseConfig& p, const UniformGrid& g) {
  std::vector<double> v(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double t = g.at(i);
    const double z = (t - p.center) / p.width;
    v[i] = p.amplitude * std::exp(-z * z) * smoothstep(t / p.ramp);
  }
  return TimeSeries(g.start, g.step, std::move(v));
}

TimeSeries add_noise(const TimeSeries& s, double level, std::mt19937_64& rng) {
  if (level <= 0.0) return s;
  std::normal_distribution<double> dist(0.0, level * s.max_abs());
  std::vector<double> v = s.values();
  for (std::size_t i = 1; i < v.size(); ++i) v[i] += dist(rng);
  return TimeSeries(s.t0(), s.dt(), std::move(v));
}

// Equal-length prefixes of two series on the same grid.
std::pair<TimeSeries, TimeSeries> common_prefix(const TimeSeries& a, const TimeSeries& b) {
  const std::size_t n = std::min(a.size(), b.size());
  return {a.head(n), b.head(n)};
}

json params_json(const SolitonPair& p) {
  return {{"q1", p.q1}, {"q2", p.q2}, {"t1", p.t1}, {"t2", p.t2}, {"eps1", p.eps1}, {"eps2", p.eps2}};
}

json fit_json(const FitResult& f) {
  return {{"residual_norm", f.residual_norm}, {"iterations", f.iterations}, {"converged", f.converged}};
}

double rel_change(double recovered, double exact) {
  return std::abs(recovered - exact) / std::max(std::abs(exact), 1e-300);
}

class Writer {
 public:
  explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  void series(const std::string& name, const std::string& abscissa, const std::string& value,
              const TimeSeries& s, const TimeSeries* exact = nullptr) {
    const auto path = dir_ / (name + ".csv");
    write_series_csv(path, abscissa, value, s, exact, value + "_exact");
    files_.push_back(path);
  }

  void table(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& columns) {
    const auto path = dir_ / (name + ".csv");
    write_table_csv(path, header, columns);
    files_.push_back(path);
  }

  void plot(const std::string& title, const std::string& file, const std::string& x,
            std::vector<std::string> y) {
    manifest_.push_back({{"title", title}, {"file", file + ".csv"}, {"x", x}, {"y", std::move(y)}});
  }

  // A relative L2 metric together with where to recompute it from.
  json metric(double value, const std::string& file, std::size_t rows) const {
    return {{"value", value}, {"file", file + ".csv"}, {"rows", rows}};
  }

  ScenarioResult finish(json summary) {
    json names = json::array();
    for (const auto& f : files_) names.push_back(f.filename().string());
    summary["files"] = names;
    const auto manifest_path = dir_ / "plot_manifest.json";
    std::ofstream(manifest_path) << json{{"plots", manifest_}}.dump(2) << '\n';
    const auto summary_path = dir_ / "summary.json";
    std::ofstream(summary_path) << summary.dump(2) << '\n';
    files_.push_back(manifest_path);
    files_.push_back(summary_path);
    return {std::move(summary), files_};
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
  json manifest_ = json::array();
};

json diagnostics_json(const InversionDiagnostics& d) {
  return {{"min_jacobian", d.breaking.min_jacobian},
          {"min_abs_jacobian", d.breaking.min_abs_jacobian},
          {"breaking", d.breaking.breaking},
          {"floor_hits", d.floor_hits},
          {"imag_residue", d.imag_residue},
          {"truncation_change", d.truncation_change},
          {"gamma_boundary_hits", d.gamma_boundary_hits},
          {"trusted_count", d.trusted_count},
          {"bromwich_a", d.bromwich_a},
          {"window", d.window}};
}

json recovery_json(const Recovery& r) {
  return {{"floor_hits", r.floor_hits},
          {"imag_residue", r.imag_residue},
          {"trusted_count", r.trusted_count},
          {"bromwich_a", r.bromwich_a},
          {"window", r.window}};
}

InversionConfig inversion_config(const ScenarioConfig& c) {
  InversionConfig ic;
  ic.bathymetry = c.bathymetry;
  ic.n_modes = c.grid.modes;
  ic.sigma_nodes = c.grid.sigma_nodes;
  ic.laplace = c.inversion;
  return ic;
}

UniformGrid tau_grid(const ScenarioConfig& c) { return {0.0, c.grid.dt, c.grid.tau_points}; }

json run_manufactured(const ScenarioConfig& c, Writer& w, std::mt19937_64& rng) {
  OracleGrids og;
  og.dt = c.grid.dt;
  og.samples = c.grid.tau_points;
  og.sigma_buoy = c.bathymetry.sigma_L;
  og.x_buoy = c.bathymetry.L;
  const SemiInfiniteRecord exact =
      run_stage("oracle", [&] { return semi_infinite_ivp(c.profile, c.quadrature, og); });
  const TimeSeries R = add_noise(exact.runup, c.noise, rng);
  const RunupInversion inv = invert_runup(R, inversion_config(c));
  const std::size_t K = inv.diagnostics.trusted_count;

  w.series("runup", "t", "R", R);
  const auto [sh, sh_exact] = common_prefix(inv.psi_sh, exact.psi_shore);
  w.series("psi_shore", "tau", "psi_shore", sh, &sh_exact);
  w.series("psi_b", "tau", "psi_b", inv.psi_b, &exact.psi_b);
  w.series("phi_b", "tau", "phi_b", inv.phi_b, &exact.phi_b);
  const auto [eta, eta_exact] = common_prefix(inv.eta_b, exact.eta_buoy);
  const auto [u, u_exact] = common_prefix(inv.u_b, exact.u_buoy);
  w.series("eta_b", "t", "eta_b", eta, &eta_exact);
  w.series("u_b", "t", "u_b", u, &u_exact);
  w.plot("run-up record", "runup", "t", {"R"});
  w.plot("shoreline psi, recovered vs exact", "psi_shore", "tau", {"psi_shore", "psi_shore_exact"});
  w.plot("boundary psi, recovered vs exact", "psi_b", "tau", {"psi_b", "psi_b_exact"});
  w.plot("boundary phi, recovered vs exact", "phi_b", "tau", {"phi_b", "phi_b_exact"});
  w.plot("buoy displacement", "eta_b", "t", {"eta_b", "eta_b_exact"});
  w.plot("buoy velocity", "u_b", "t", {"u_b", "u_b_exact"});

  const std::size_t Ke = std::min(K, eta.size());
  const std::size_t Ks = std::min(K, sh.size());
  json metrics = {
      {"psi_b_rel_l2", w.metric(relative_l2(inv.psi_b.span(), exact.psi_b.span(), K), "psi_b", K)},
      {"phi_b_rel_l2", w.metric(relative_l2(inv.phi_b.span(), exact.phi_b.span(), K), "phi_b", K)},
      {"eta_b_rel_l2", w.metric(relative_l2(eta.span(), eta_exact.span(), Ke), "eta_b", Ke)},
      {"u_b_rel_l2", w.metric(relative_l2(u.span(), u_exact.span(), Ke), "u_b", Ke)},
      {"psi_shore_rel_l2", w.metric(relative_l2(sh.span(), sh_exact.span(), Ks), "psi_shore", Ks)}};
  return {{"metrics", metrics},
          {"diagnostics", diagnostics_json(inv.diagnostics)},
          {"oracle", {{"tail_ratio", exact.tail_ratio}}}};
}

json run_roundtrip(const ScenarioConfig& c, Writer& w, std::mt19937_64& rng) {
  const TimeSeries psi_b = pulse_series(c.pulse, tau_grid(c));
  const ModeSet modes = build_modes(c.bathymetry.sigma_L, c.grid.modes);
  const TimeSeries psi_sh = add_noise(
      run_stage("shoreline_equation", [&] { return shoreline_equation(psi_b, modes); }), c.noise, rng);
  const Recovery rec = run_stage("recover_psi_b", [&] { return recover_boundary(psi_sh, modes, c.inversion); });
  const std::size_t K = rec.trusted_count;
  w.series("psi_shore", "tau", "psi_shore", psi_sh);
  w.series("psi_b", "tau", "psi_b", rec.psi_b, &psi_b);
  w.plot("shoreline signal", "psi_shore", "tau", {"psi_shore"});
  w.plot("boundary psi, recovered vs input", "psi_b", "tau", {"psi_b", "psi_b_exact"});
  json metrics = {
      {"psi_b_rel_l2", w.metric(relative_l2(rec.psi_b.span(), psi_b.span(), K), "psi_b", K)}};
  return {{"metrics", metrics}, {"diagnostics", recovery_json(rec)}};
}

// psi_b recovered from the shoreline for a generated boundary series, either
// directly in the hodograph plane or through a run-up record.
struct StitchInput {
  TimeSeries psi_sh;
  TimeSeries psi_b;
  json diagnostics;
  std::optional<RunupInversion> inversion;
};

StitchInput recover_for_stitching(const ScenarioConfig& c, const TimeSeries& psi_b_exact,
                                  bool via_runup, std::mt19937_64& rng) {
  const ModeSet modes = build_modes(c.bathymetry.sigma_L, c.grid.modes);
  if (!via_runup) {
    const TimeSeries psi_sh = add_noise(
        run_stage("shoreline_equation", [&] { return shoreline_equation(psi_b_exact, modes); }),
        c.noise, rng);
    Recovery rec = run_stage("recover_psi_b", [&] { return recover_boundary(psi_sh, modes, c.inversion); });
    return {psi_sh, rec.psi_b, recovery_json(rec), std::nullopt};
  }
  const ModeSet filled =
      run_stage("duhamel_coefficients", [&] { return duhamel_coefficients(psi_b_exact, modes); });
  const ShorelineFields sh = shoreline_fields(filled, psi_b_exact);
  const TimeSeries R = add_noise(
      run_stage("hodograph_to_shore", [&] { return hodograph_to_shore(sh.psi, sh.phi); }), c.noise, rng);
  RunupInversion inv = invert_runup(R, inversion_config(c));
  return {inv.psi_sh, inv.psi_b, diagnostics_json(inv.diagnostics), std::move(inv)};
}

json crests_json(const TimeSeries& s) {
  json out = json::array();
  for (const Crest& cr : find_crests(s)) out.push_back({{"position", cr.position}, {"height", cr.height}});
  return out;
}

json run_boussinesq(const ScenarioConfig& c, Writer& w, std::mt19937_64& rng) {
  const SolitonPair& truth = c.solitons;
  const TimeSeries psi_b_exact = boussinesq_boundary(truth, c.x_buoy, tau_grid(c));
  const StitchInput in = recover_for_stitching(c, psi_b_exact, c.via_runup, rng);
  const std::size_t K = static_cast<std::size_t>(std::floor(c.inversion.trusted_fraction *
                                                            static_cast<double>(in.psi_b.size())));

  const TimeSeries cropped = crop(in.psi_b, c.crop_lo, c.crop_hi);
  const TimeSeries cropped_exact = crop(psi_b_exact, c.crop_lo, c.crop_hi);
  SolitonPair guess = truth;
  if (c.guess) {
    guess = *c.guess;
  } else {
    guess.q1 *= 1.1;
    guess.q2 *= 0.9;
    guess.t1 += 5.0;
    guess.t2 -= 5.0;
  }
  const SolitonFit fit = run_stage("fit_two_soliton", [&] { return fit_two_soliton(cropped, c.x_buoy, guess); });
  const TimeSeries fitted = crop(boussinesq_boundary(fit.params, c.x_buoy, tau_grid(c)), c.crop_lo, c.crop_hi);

  const auto x_exact = backtrack_solitons(truth, c.t_event);
  const auto x_rec = backtrack_solitons(fit.params, c.t_event);
  const TimeSeries ic_exact = boussinesq_initial_condition(truth, c.t_event, c.x_grid);
  const TimeSeries ic_rec = boussinesq_initial_condition(fit.params, c.t_event, c.x_grid);
  const TimeSeries lswe = travelling_profile(in.psi_b, c.comparison_speed, c.x_buoy, c.t_event, c.x_grid);
  const ModelComparison cmp = compare_models(ic_rec, lswe);

  w.series("psi_shore", "tau", "psi_shore", in.psi_sh);
  w.series("psi_b", "tau", "psi_b", in.psi_b, &psi_b_exact);
  w.series("psi_b_cropped", "tau", "psi_b", cropped, &cropped_exact);
  w.series("soliton_fit", "tau", "fit", fitted, &cropped);
  w.series("initial_condition", "x", "eta", ic_rec, &ic_exact);
  w.series("model_comparison", "x", "boussinesq", ic_rec, &lswe);
  if (in.inversion) {
    w.series("eta_b", "t", "eta_b", in.inversion->eta_b);
    w.series("u_b", "t", "u_b", in.inversion->u_b);
  }
  w.plot("shoreline signal", "psi_shore", "tau", {"psi_shore"});
  w.plot("boundary psi, recovered vs exact", "psi_b", "tau", {"psi_b", "psi_b_exact"});
  w.plot("two-soliton fit of the cropped recovery", "soliton_fit", "tau", {"fit", "fit_exact"});
  w.plot("initial condition, recovered vs exact", "initial_condition", "x", {"eta", "eta_exact"});
  w.plot("Boussinesq vs linear back-tracking", "model_comparison", "x", {"boussinesq", "boussinesq_exact"});

  json metrics = {
      {"psi_b_rel_l2", w.metric(relative_l2(in.psi_b.span(), psi_b_exact.span(), K), "psi_b", K)},
      {"cropped_rel_l2", w.metric(relative_l2(cropped.span(), cropped_exact.span()), "psi_b_cropped",
                                  cropped.size())},
      {"peak_offset", {std::abs(x_rec[0] - x_exact[0]), std::abs(x_rec[1] - x_exact[1])}},
      {"param_rel_error",
       {{"q1", rel_change(fit.params.q1, truth.q1)},
        {"q2", rel_change(fit.params.q2, truth.q2)},
        {"t1", rel_change(fit.params.t1, truth.t1)},
        {"t2", rel_change(fit.params.t2, truth.t2)}}}};
  json comparison = {{"speed", c.comparison_speed},
                     {"peak_offsets", cmp.peak_offsets},
                     {"amplitude_ratios", cmp.amplitude_ratios},
                     {"l2_distance", cmp.l2_distance}};
  return {{"metrics", metrics},
          {"peaks", {{"exact", {x_exact[0], x_exact[1]}}, {"recovered", {x_rec[0], x_rec[1]}}}},
          {"fit", fit_json(fit.fit)},
          {"params", {{"exact", params_json(truth)}, {"recovered", params_json(fit.params)}}},
          {"crests", {{"exact", crests_json(ic_exact)}, {"recovered", crests_json(ic_rec)}}},
          {"comparison", comparison},
          {"diagnostics", in.diagnostics}};
}

json run_lswe(const ScenarioConfig& c, Writer& w, std::mt19937_64& rng) {
  const TravellingWaveSpec& truth = c.wave;
  const double L = c.bathymetry.L;
  const TimeSeries psi_b_exact = lswe_boundary(truth, L, tau_grid(c));
  const StitchInput in = recover_for_stitching(c, psi_b_exact, false, rng);
  const std::size_t K = static_cast<std::size_t>(std::floor(c.inversion.trusted_fraction *
                                                            static_cast<double>(in.psi_b.size())));
  const TimeSeries cropped = crop(in.psi_b, c.crop_lo, c.crop_hi);
  const TimeSeries cropped_exact = crop(psi_b_exact, c.crop_lo, c.crop_hi);

  TravellingWaveSpec guess = truth;
  for (double& o : guess.offsets) o += 1.0;
  for (double& a : guess.amplitudes) a *= 0.9;
  const TravellingWaveFit fit =
      run_stage("fit_travelling_wave", [&] { return fit_travelling_wave(cropped, L, guess); });

  const std::vector<double> x_exact = lswe_backtrack(truth, c.t_event);
  const std::vector<double> x_rec = lswe_backtrack(fit.spec, c.t_event);
  std::vector<double> offsets(x_exact.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) offsets[i] = std::abs(x_rec[i] - x_exact[i]);
  const TimeSeries ic_exact = lswe_initial_condition(truth, c.t_event, c.x_grid);
  const TimeSeries ic_rec = lswe_initial_condition(fit.spec, c.t_event, c.x_grid);

  w.series("psi_shore", "tau", "psi_shore", in.psi_sh);
  w.series("psi_b", "tau", "psi_b", in.psi_b, &psi_b_exact);
  w.series("psi_b_cropped", "tau", "psi_b", cropped, &cropped_exact);
  w.series("initial_condition", "x", "eta", ic_rec, &ic_exact);
  w.plot("shoreline signal", "psi_shore", "tau", {"psi_shore"});
  w.plot("boundary psi, recovered vs input", "psi_b_cropped", "tau", {"psi_b", "psi_b_exact"});
  w.plot("initial condition, recovered vs exact", "initial_condition", "x", {"eta", "eta_exact"});

  json metrics = {
      {"psi_b_rel_l2", w.metric(relative_l2(in.psi_b.span(), psi_b_exact.span(), K), "psi_b", K)},
      {"cropped_rel_l2", w.metric(relative_l2(cropped.span(), cropped_exact.span()), "psi_b_cropped",
                                  cropped.size())},
      {"feature_offset", offsets}};
  return {{"metrics", metrics},
          {"features", {{"exact", x_exact}, {"recovered", x_rec}}},
          {"fit", fit_json(fit.fit)},
          {"recovered_offsets", fit.spec.offsets},
          {"recovered_amplitudes", fit.spec.amplitudes},
          {"diagnostics", in.diagnostics}};
}

json run_benchmark_kind(const ScenarioConfig& c, Writer& w) {
  const BenchmarkResult b = run_benchmark(c.benchmark, c.bathymetry);
  std::vector<double> n, modes, seconds;
  json rows = json::array();
  for (const auto& r : b.rows) {
    n.push_back(static_cast<double>(r.n));
    modes.push_back(static_cast<double>(r.modes));
    seconds.push_back(r.seconds);
    rows.push_back({{"n", r.n}, {"modes", r.modes}, {"seconds", r.seconds}});
  }
  w.table("benchmark", {"n", "modes", "seconds"}, {n, modes, seconds});
  w.plot("wall-clock against record length (log-log)", "benchmark", "n", {"seconds"});
  return {{"metrics", {{"slope", b.slope}}}, {"rows", rows}};
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  switch (kind) {
    case ScenarioKind::boussinesq_stitch:
    case ScenarioKind::lswe_stitch:
      c.bathymetry.L = 200.0;
      c.bathymetry.sigma_L = 200.0;
      c.grid.dt = 400.0 / static_cast<double>(c.grid.tau_points);
      c.x_grid = kind == ScenarioKind::boussinesq_stitch ? UniformGrid{0.0, 0.05, 12001}
                                                         : UniformGrid{2600.0, 0.05, 6001};
      c.wave = TravellingWaveSpec::make(WaveKind::soliton, std::sqrt(200.0), 40.0);
      break;
    default:
      break;
  }
  return c;
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  const Section top(j, "");
  top.allow({"kind", "output_dir", "seed", "noise", "bathymetry", "grid", "inversion", "profile",
             "quadrature", "pulse", "solitons", "guess", "x_buoy", "via_runup", "comparison_speed",
             "wave", "t_event", "crop", "x_grid", "benchmark"});
  std::string kind;
  top.text("kind", kind);
  if (kind.empty()) throw ValidationError("kind: required");
  ScenarioConfig c = defaults(parse_scenario_kind(kind));

  std::string out = c.output_dir.string();
  top.text("output_dir", out);
  c.output_dir = out;
  if (top.has("seed")) {
    const json& v = top.raw("seed");
    if (!v.is_number_unsigned()) throw ValidationError("seed: expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  top.number("noise", c.noise);

  if (top.has("bathymetry")) {
    const Section s = top.section("bathymetry");
    s.allow({"L", "sigma_L", "alpha", "H0", "g"});
    s.number("L", c.bathymetry.L);
    c.bathymetry.sigma_L = c.bathymetry.L;
    s.number("sigma_L", c.bathymetry.sigma_L);
    s.number("alpha", c.bathymetry.alpha);
    s.number("H0", c.bathymetry.H0);
    s.number("g", c.bathymetry.g);
  }
  if (top.has("grid")) {
    const Section s = top.section("grid");
    s.allow({"tau_points", "dt", "duration", "sigma_nodes", "modes"});
    s.count("tau_points", c.grid.tau_points);
    s.count("sigma_nodes", c.grid.sigma_nodes);
    s.count("modes", c.grid.modes);
    if (s.has("dt") && s.has("duration")) s.fail("give dt or duration, not both");
    s.number("dt", c.grid.dt);
    if (s.has("duration")) {
      double T = 0.0;
      s.number("duration", T);
      c.grid.dt = T / static_cast<double>(c.grid.tau_points);
    }
  }
  if (top.has("inversion")) {
    const Section s = top.section("inversion");
    s.allow({"bromwich_a", "pad_factor", "eps_reg", "trusted_fraction"});
    if (s.has("bromwich_a")) {
      double a = 0.0;
      s.number("bromwich_a", a);
      c.inversion.bromwich_a = a;
    }
    s.number("pad_factor", c.inversion.pad_factor);
    s.number("eps_reg", c.inversion.eps_reg);
    s.number("trusted_fraction", c.inversion.trusted_fraction);
  }
  if (top.has("profile")) c.profile = read_profile(top.section("profile"));
  if (top.has("quadrature")) {
    const Section s = top.section("quadrature");
    s.allow({"k_max", "k_nodes", "r_max", "r_nodes", "tail_tolerance"});
    s.number("k_max", c.quadrature.k_max);
    s.count("k_nodes", c.quadrature.k_nodes);
    s.number("r_max", c.quadrature.r_max);
    s.count("r_nodes", c.quadrature.r_nodes);
    s.number("tail_tolerance", c.quadrature.tail_tolerance);
  }
  if (top.has("pulse")) {
    const Section s = top.section("pulse");
    s.allow({"amplitude", "center", "width", "ramp"});
    s.number("amplitude", c.pulse.amplitude);
    s.number("center", c.pulse.center);
    s.number("width", c.pulse.width);
    s.number("ramp", c.pulse.ramp);
  }
  if (top.has("solitons")) read_solitons(top.section("solitons"), c.solitons);
  if (top.has("guess")) {
    SolitonPair g = c.solitons;
    read_solitons(top.section("guess"), g);
    c.guess = g;
  }
  top.number("x_buoy", c.x_buoy);
  top.flag("via_runup", c.via_runup);
  top.number("comparison_speed", c.comparison_speed);
  if (top.has("wave")) read_wave(top.section("wave"), c.wave);
  top.number("t_event", c.t_event);
  if (top.has("crop")) {
    std::vector<double> w;
    top.numbers("crop", w);
    if (w.size() != 2) throw ValidationError("crop: expected [t_lo, t_hi]");
    c.crop_lo = w[0];
    c.crop_hi = w[1];
  }
  if (top.has("x_grid")) {
    const Section s = top.section("x_grid");
    s.allow({"start", "step", "count"});
    s.number("start", c.x_grid.start);
    s.number("step", c.x_grid.step);
    s.count("count", c.x_grid.count);
  }
  if (top.has("benchmark")) {
    const Section s = top.section("benchmark");
    s.allow({"sizes", "repetitions", "modes_per_point", "sigma_nodes_per_point", "duration"});
    if (s.has("sizes")) {
      std::vector<double> sizes;
      s.numbers("sizes", sizes);
      c.benchmark.sizes.clear();
      for (double v : sizes) {
        if (!(v >= 16.0) || v != std::floor(v)) throw ValidationError("benchmark.sizes: expected integers >= 16");
        c.benchmark.sizes.push_back(static_cast<std::size_t>(v));
      }
    }
    s.count("repetitions", c.benchmark.repetitions);
    s.number("modes_per_point", c.benchmark.modes_per_point);
    s.number("sigma_nodes_per_point", c.benchmark.sigma_nodes_per_point);
    s.number("duration", c.benchmark.duration);
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

void ScenarioConfig::validate() const {
  checked("bathymetry", [&] { bathymetry.validate(); });
  if (!(grid.dt > 0.0)) throw ValidationError("grid.dt: must be positive");
  if (grid.tau_points < 16) throw ValidationError("grid.tau_points: need at least 16");
  if (grid.sigma_nodes < 3) throw ValidationError("grid.sigma_nodes: need at least 3");
  if (!(noise >= 0.0)) throw ValidationError("noise: must be non-negative");
  if (inversion.bromwich_a && !(*inversion.bromwich_a > 0.0)) {
    throw ValidationError("inversion.bromwich_a: must be positive");
  }
  if (!(inversion.pad_factor >= 1.0)) throw ValidationError("inversion.pad_factor: must be >= 1");
  if (!(inversion.eps_reg > 0.0)) throw ValidationError("inversion.eps_reg: must be positive");
  if (!(inversion.trusted_fraction > 0.0 && inversion.trusted_fraction <= 1.0)) {
    throw ValidationError("inversion.trusted_fraction: must lie in (0, 1]");
  }
  const double T = grid.dt * static_cast<double>(grid.tau_points - 1);
  switch (kind) {
    case ScenarioKind::manufactured_ivp:
      if (!(quadrature.k_max > 0.0 && quadrature.r_max > 0.0 && quadrature.tail_tolerance > 0.0)) {
        throw ValidationError("quadrature: k_max, r_max and tail_tolerance must be positive");
      }
      if (quadrature.r_max * quadrature.r_max < 1.5 * bathymetry.sigma_L) {
        throw ValidationError("quadrature.r_max: must cover sigma up to 1.5 sigma_L");
      }
      break;
    case ScenarioKind::roundtrip:
      if (!(pulse.width > 0.0)) throw ValidationError("pulse.width: must be positive");
      if (!(pulse.ramp > 0.0)) throw ValidationError("pulse.ramp: must be positive");
      break;
    case ScenarioKind::boussinesq_stitch:
    case ScenarioKind::lswe_stitch:
      if (kind == ScenarioKind::boussinesq_stitch) {
        checked("solitons", [&] { solitons.validate(); });
        if (guess) checked("guess", [&] { guess->validate(); });
        if (!(comparison_speed > 0.0)) throw ValidationError("comparison_speed: must be positive");
      } else {
        checked("wave", [&] { wave.validate(); });
      }
      if (!(crop_lo < crop_hi)) throw ValidationError("crop: t_lo must be below t_hi");
      if (crop_lo < 0.0 || crop_hi > T) {
        throw ValidationError("crop: window must lie inside the record [0, " + std::to_string(T) + "]");
      }
      if (!(x_grid.step > 0.0) || x_grid.count < 2) {
        throw ValidationError("x_grid: step must be positive and count at least 2");
      }
      break;
    case ScenarioKind::benchmark: {
      const auto& b = benchmark;
      if (b.sizes.size() < 3) throw ValidationError("benchmark.sizes: need at least 3 sizes");
      const auto [lo, hi] = std::minmax_element(b.sizes.begin(), b.sizes.end());
      if (*hi < 4 * *lo) throw ValidationError("benchmark.sizes: must span at least a factor of 4");
      if (!(b.modes_per_point > 0.0 && b.sigma_nodes_per_point > 0.0 && b.duration > 0.0)) {
        throw ValidationError("benchmark: modes_per_point, sigma_nodes_per_point and duration must be positive");
      }
      break;
    }
  }
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(config.seed);
  Writer w(config.output_dir);
  json body;
  switch (config.kind) {
    case ScenarioKind::manufactured_ivp: body = run_manufactured(config, w, rng); break;
    case ScenarioKind::roundtrip: body = run_roundtrip(config, w, rng); break;
    case ScenarioKind::boussinesq_stitch: body = run_boussinesq(config, w, rng); break;
    case ScenarioKind::lswe_stitch: body = run_lswe(config, w, rng); break;
    case ScenarioKind::benchmark: body = run_benchmark_kind(config, w); break;
  }
  body["kind"] = to_string(config.kind);
  body["seed"] = config.seed;
  body["runtime_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return w.finish(std::move(body));
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config, const Bathymetry& bathymetry) {
  if (config.sizes.size() < 3) throw ValidationError("benchmark needs at least 3 sizes");
  if (config.repetitions == 0) throw ValidationError("benchmark needs at least 1 repetition");
  BenchmarkResult out;
  std::vector<double> lx, ly;
  for (std::size_t n : config.sizes) {
    const double dt = config.duration / static_cast<double>(n);
    PulseConfig pulse;
    pulse.center = 0.3 * config.duration;
    pulse.width = config.duration / 15.0;
    pulse.ramp = 2.0 * pulse.width;
    const TimeSeries psi_b = pulse_series(pulse, {0.0, dt, n});
    InversionConfig ic;
    ic.bathymetry = bathymetry;
    ic.n_modes = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(config.modes_per_point * static_cast<double>(n))));
    ic.sigma_nodes = std::max<std::size_t>(3, static_cast<std::size_t>(std::lround(config.sigma_nodes_per_point * static_cast<double>(n))));
    const ModeSet filled = duhamel_coefficients(psi_b, build_modes(bathymetry.sigma_L, ic.n_modes));
    const ShorelineFields sh = shoreline_fields(filled, psi_b);
    const TimeSeries R = hodograph_to_shore(sh.psi, sh.phi);

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < config.repetitions; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const RunupInversion inv = invert_runup(R, ic);
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      best = std::min(best, s);
      (void)inv;
    }
    out.rows.push_back({n, ic.n_modes, best});
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(best));
  }
  out.slope = linear_fit(lx, ly).first;
  return out;
}

}  // namespace runup
