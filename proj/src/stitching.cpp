#include "runup/stitching.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "runup/error.hpp"

namespace runup {

namespace {

double sech2(double x) {
  const double s = 1.0 / std::cosh(x);
  return s * s;
}

std::vector<double> taper_weights(std::size_t n, std::size_t taper) {
  std::vector<double> w(n, 1.0);
  taper = std::min(taper, n / 2);
  for (std::size_t k = 0; k < taper; ++k) {
    const double v = 0.5 * (1.0 - std::cos(M_PI * static_cast<double>(k) / static_cast<double>(taper)));
    w[k] = v;
    w[n - 1 - k] = v;
  }
  return w;
}

}  // namespace

double SolitonPair::velocity(int i) const {
  const double q = i == 1 ? q1 : q2;
  return std::sqrt(1.0 + 4.0 * q * q);
}

double SolitonPair::frequency(int i) const {
  return (i == 1 ? eps1 * q1 : eps2 * q2) * velocity(i);
}

double SolitonPair::phase() const {
  const double dv = eps1 * velocity(1) - eps2 * velocity(2);
  const double num = dv * dv + 12.0 * (q1 - q2) * (q1 - q2);
  const double den = dv * dv + 12.0 * (q1 + q2) * (q1 + q2);
  return 0.5 * std::log(num / den);
}

double SolitonPair::coupling() const {
  const double h = 0.5 * phase();
  return std::sinh(h) * ((q1 * q1 + q2 * q2) * std::sinh(h) + 2.0 * q1 * q2 * std::cosh(h));
}

void SolitonPair::validate() const {
  if (!(q1 > 0.0) || !(q2 > 0.0)) throw ValidationError("soliton q1 and q2 must be positive");
  if ((eps1 != 1 && eps1 != -1) || (eps2 != 1 && eps2 != -1)) {
    throw ValidationError("soliton directions eps1, eps2 must be +1 or -1");
  }
  if (!std::isfinite(t1) || !std::isfinite(t2)) throw ValidationError("soliton times must be finite");
  if (!std::isfinite(phase())) throw ValidationError("identical co-moving solitons have no phase shift");
}

double two_soliton_eta(const SolitonPair& p, double x, double t) {
  const double phi = p.phase();
  const double A = p.coupling();
  const double xi1 = p.q1 * x - p.frequency(1) * (t - p.t1);
  const double xi2 = p.q2 * x - p.frequency(2) * (t - p.t2);
  const double s1 = sech2(xi1), s2 = sech2(xi2);
  const double den = std::cosh(0.5 * phi) + std::sinh(0.5 * phi) * std::tanh(xi1) * std::tanh(xi2);
  return (p.q1 * p.q1 * s1 + p.q2 * p.q2 * s2 + A * s1 * s2) / (den * den);
}

TimeSeries boussinesq_boundary(const SolitonPair& p, double x_buoy, const UniformGrid& t) {
  p.validate();
  std::vector<double> v(t.count);
  for (std::size_t i = 0; i < t.count; ++i) v[i] = two_soliton_eta(p, x_buoy, t.at(i));
  return TimeSeries(t.start, t.step, std::move(v));
}

TimeSeries crop(const TimeSeries& series, double t_lo, double t_hi, std::size_t taper) {
  if (!(t_lo < t_hi)) throw ValidationError("crop: need t_lo < t_hi");
  const double tol = 1e-9 * series.dt();
  if (t_lo < series.t0() - tol || t_hi > series.end_time() + tol) {
    throw ValidationError("crop: window lies outside the record");
  }
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil((t_lo - series.t0()) / series.dt() - 1e-9)));
  const auto hi = std::min(series.size() - 1,
                           static_cast<std::size_t>(std::floor((t_hi - series.t0()) / series.dt() + 1e-9)));
  if (hi < lo + 1) throw ValidationError("crop: window holds fewer than 2 samples");
  std::vector<double> v(series.values().begin() + static_cast<long>(lo),
                        series.values().begin() + static_cast<long>(hi) + 1);
  const std::vector<double> w = taper_weights(v.size(), taper);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] *= w[k];
  return TimeSeries(series.time(lo), series.dt(), std::move(v));
}

std::vector<Crest> find_crests(const TimeSeries& s, double relative_threshold) {
  double top = 0.0;
  for (double v : s.values()) top = std::max(top, v);
  std::vector<Crest> out;
  if (!(top > 0.0)) return out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (!(s[i] > s[i - 1] && s[i] >= s[i + 1]) || s[i] < relative_threshold * top) continue;
    const double curv = s[i - 1] - 2.0 * s[i] + s[i + 1];
    double delta = 0.0;
    if (curv < 0.0) delta = 0.5 * (s[i - 1] - s[i + 1]) / curv;
    out.push_back({s.time(i) + delta * s.dt(), s[i] - 0.25 * (s[i - 1] - s[i + 1]) * delta});
  }
  return out;
}

namespace {

// Arrival time at x_buoy of the crest of soliton i: xi_i(x_buoy, t) = 0.
double arrival(const SolitonPair& p, int i, double x_buoy) {
  const double q = i == 1 ? p.q1 : p.q2;
  const double t = i == 1 ? p.t1 : p.t2;
  return t + q * x_buoy / p.frequency(i);
}

SolitonPair from_arrival(const SolitonPair& base, const std::vector<double>& x, double x_buoy) {
  SolitonPair p = base;
  p.q1 = std::abs(x[0]);
  p.q2 = std::abs(x[1]);
  p.t1 = x[2] - p.q1 * x_buoy / p.frequency(1);
  p.t2 = x[3] - p.q2 * x_buoy / p.frequency(2);
  return p;
}

}  // namespace

SolitonFit fit_two_soliton(const TimeSeries& cropped, double x_buoy, const SolitonPair& guess,
                           std::size_t taper) {
  guess.validate();
  const std::vector<double> w = taper_weights(cropped.size(), taper);
  const ResidualFunction residual = [&](const std::vector<double>& x) {
    const SolitonPair p = from_arrival(guess, x, x_buoy);
    std::vector<double> r(cropped.size());
    for (std::size_t k = 0; k < cropped.size(); ++k) {
      r[k] = w[k] * two_soliton_eta(p, x_buoy, cropped.time(k)) - cropped[k];
    }
    return r;
  };

  std::vector<std::vector<double>> starts;
  starts.push_back({guess.q1, guess.q2, arrival(guess, 1, x_buoy), arrival(guess, 2, x_buoy)});
  std::vector<Crest> crests = find_crests(cropped, 0.02);
  if (crests.size() >= 2) {
    std::sort(crests.begin(), crests.end(), [](const Crest& a, const Crest& b) { return a.height > b.height; });
    Crest first = crests[0], second = crests[1];
    if (first.position > second.position) std::swap(first, second);
    std::vector<double> seed(4);
    const bool one_leads = arrival(guess, 1, x_buoy) <= arrival(guess, 2, x_buoy);
    const Crest& c1 = one_leads ? first : second;
    const Crest& c2 = one_leads ? second : first;
    seed = {std::sqrt(c1.height), std::sqrt(c2.height), c1.position, c2.position};
    starts.push_back(seed);
  }

  SolitonFit best;
  bool have = false;
  for (const auto& start : starts) {
    FitResult fr = least_squares(residual, start);
    if (!have || fr.residual_norm < best.fit.residual_norm) {
      best.params = from_arrival(guess, fr.parameters, x_buoy);
      best.fit = fr;
      have = true;
    }
  }
  best.fit.parameters = {best.params.q1, best.params.q2, best.params.t1, best.params.t2};
  return best;
}

std::array<double, 2> backtrack_solitons(const SolitonPair& p, double t_event) {
  return {-p.velocity(1) * (t_event - p.t1), -p.velocity(2) * (t_event - p.t2)};
}

TimeSeries boussinesq_initial_condition(const SolitonPair& p, double t_event, const UniformGrid& x) {
  p.validate();
  std::vector<double> v(x.count);
  for (std::size_t i = 0; i < x.count; ++i) v[i] = two_soliton_eta(p, x.at(i), t_event);
  return TimeSeries(x.start, x.step, std::move(v));
}

TravellingWaveSpec TravellingWaveSpec::make(WaveKind kind, double c, double width) {
  TravellingWaveSpec s;
  s.kind = kind;
  s.c = c;
  s.width = width;
  if (kind == WaveKind::n_wave) {
    s.offsets = {100.0, 90.0};
    s.amplitudes = {1.0, -0.5};
  }
  return s;
}

double TravellingWaveSpec::eta(double x, double t) const {
  double v = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    v += amplitudes[i] * sech2((x + c * (t - offsets[i])) / width);
  }
  return v;
}

void TravellingWaveSpec::validate() const {
  if (!(c > 0.0)) throw ValidationError("travelling wave speed c must be positive");
  if (!(width > 0.0)) throw ValidationError("travelling wave width must be positive");
  const std::size_t need = kind == WaveKind::soliton ? 1 : 2;
  if (offsets.size() != need || amplitudes.size() != need) {
    throw ValidationError("travelling wave needs " + std::to_string(need) +
                          " offsets and amplitudes for its kind");
  }
}

TimeSeries lswe_boundary(const TravellingWaveSpec& spec, double L, const UniformGrid& t) {
  spec.validate();
  std::vector<double> v(t.count);
  for (std::size_t i = 0; i < t.count; ++i) v[i] = spec.eta(L, t.at(i));
  return TimeSeries(t.start, t.step, std::move(v));
}

std::vector<double> lswe_backtrack(const TravellingWaveSpec& spec, double t_event) {
  std::vector<double> x;
  x.reserve(spec.offsets.size());
  for (double t0 : spec.offsets) x.push_back(spec.c * (t0 - t_event));
  return x;
}

TimeSeries lswe_initial_condition(const TravellingWaveSpec& spec, double t_event, const UniformGrid& x) {
  spec.validate();
  std::vector<double> v(x.count);
  for (std::size_t i = 0; i < x.count; ++i) v[i] = spec.eta(x.at(i), t_event);
  return TimeSeries(x.start, x.step, std::move(v));
}

TravellingWaveFit fit_travelling_wave(const TimeSeries& cropped, double L,
                                      const TravellingWaveSpec& guess, std::size_t taper) {
  guess.validate();
  const std::size_t nf = guess.offsets.size();
  const std::vector<double> w = taper_weights(cropped.size(), taper);
  auto unpack = [&](const std::vector<double>& x) {
    TravellingWaveSpec s = guess;
    for (std::size_t i = 0; i < nf; ++i) {
      s.offsets[i] = x[i];
      s.amplitudes[i] = x[nf + i];
    }
    return s;
  };
  const ResidualFunction residual = [&](const std::vector<double>& x) {
    const TravellingWaveSpec s = unpack(x);
    std::vector<double> r(cropped.size());
    for (std::size_t k = 0; k < cropped.size(); ++k) r[k] = w[k] * s.eta(L, cropped.time(k)) - cropped[k];
    return r;
  };
  std::vector<double> start(guess.offsets);
  start.insert(start.end(), guess.amplitudes.begin(), guess.amplitudes.end());
  TravellingWaveFit out;
  out.fit = least_squares(residual, start);
  out.spec = unpack(out.fit.parameters);
  return out;
}

TimeSeries travelling_profile(const TimeSeries& record, double c, double x_buoy, double t_event,
                              const UniformGrid& x) {
  if (!(c > 0.0)) throw ValidationError("travelling_profile: c must be positive");
  std::vector<double> times(record.size());
  for (std::size_t i = 0; i < record.size(); ++i) times[i] = record.time(i);
  std::vector<double> v(x.count, 0.0), query, where;
  for (std::size_t i = 0; i < x.count; ++i) {
    const double t = (x.at(i) - x_buoy) / c + t_event;
    if (t >= record.t0() && t <= record.end_time()) {
      query.push_back(t);
      where.push_back(static_cast<double>(i));
    }
  }
  const std::vector<double> vals = pchip(times, record.span(), query);
  for (std::size_t q = 0; q < vals.size(); ++q) v[static_cast<std::size_t>(where[q])] = vals[q];
  return TimeSeries(x.start, x.step, std::move(v));
}

ModelComparison compare_models(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size() || std::abs(a.t0() - b.t0()) > 1e-9 * a.dt() ||
      std::abs(a.dt() - b.dt()) > 1e-12 * a.dt()) {
    throw ValidationError("compare_models: profiles are not on a common grid");
  }
  ModelComparison out;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  out.l2_distance = std::sqrt(ss * a.dt());
  const std::vector<Crest> ca = find_crests(a), cb = find_crests(b);
  for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
    out.peak_offsets.push_back(cb[i].position - ca[i].position);
    out.amplitude_ratios.push_back(cb[i].height / ca[i].height);
  }
  return out;
}

}  // namespace runup
