#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "runup/numerics.hpp"
#include "runup/time_series.hpp"

namespace runup {

// Two-soliton solution of eta_tt = eta_xx + 6 (eta^2)_xx + eta_xxxx with
// xi_i = q_i x - w_i (t - t_i), w_i = eps_i q_i v_i, v_i = sqrt(1 + 4 q_i^2).
// x is measured offshore from the buoy, so eps_i = -1 is a soliton heading
// for the shore that passes the buoy at t = t_i.
struct SolitonPair {
  double q1 = 0.1;
  double q2 = 0.31622776601683794;
  double t1 = 75.0;
  double t2 = 250.0;
  int eps1 = -1;
  int eps2 = -1;

  double velocity(int i) const;   // v_i
  double frequency(int i) const;  // w_i
  double phase() const;           // Phi, exp(2 Phi) = interaction ratio
  double coupling() const;        // A
  // Throws ValidationError unless q_i > 0, eps_i = +-1 and the pair is not degenerate.
  void validate() const;
};

double two_soliton_eta(const SolitonPair& p, double x, double t);

// eta(x_buoy, t) on the grid. Used directly as psi_b: the velocity at the
// buoy is small enough that psi_b = eta_b + u_b^2/2 ~ eta_b.
TimeSeries boussinesq_boundary(const SolitonPair& p, double x_buoy, const UniformGrid& t);

// Samples with t_lo <= t <= t_hi. The first and last `taper` samples are
// multiplied by a raised-cosine ramp that reaches zero at the cut.
TimeSeries crop(const TimeSeries& series, double t_lo, double t_hi, std::size_t taper = 5);

struct SolitonFit {
  FitResult fit;
  SolitonPair params;
};

// Least squares over (q1, q2, t1, t2) against boussinesq_boundary, eps_i taken
// from the guess. The search runs in arrival-time coordinates, and is started
// from the guess and from a seed read off the two largest peaks of the data;
// the lower residual wins. `taper` must match the crop that produced the data
// so the model is tapered the same way.
SolitonFit fit_two_soliton(const TimeSeries& cropped, double x_buoy, const SolitonPair& guess,
                           std::size_t taper = 5);

// x_i = -v_i (t_event - t_i): where each crest was at the event time.
std::array<double, 2> backtrack_solitons(const SolitonPair& p, double t_event);

// two_soliton_eta(x, t_event) over the x grid.
TimeSeries boussinesq_initial_condition(const SolitonPair& p, double t_event, const UniformGrid& x);

enum class WaveKind { soliton, n_wave };

// Left-travelling long wave sum_i A_i sech^2((x + c (t - t0_i)) / width).
struct TravellingWaveSpec {
  WaveKind kind = WaveKind::soliton;
  double c = 1.0;
  double width = 1.0;
  std::vector<double> offsets{100.0};
  std::vector<double> amplitudes{1.0};

  // Feature sets for each kind: soliton {100}/{1}, n-wave {100, 90}/{1, -0.5}.
  static TravellingWaveSpec make(WaveKind kind, double c, double width);
  double eta(double x, double t) const;
  void validate() const;
};

TimeSeries lswe_boundary(const TravellingWaveSpec& spec, double L, const UniformGrid& t);

// x_i = c (t0_i - t_event) for every feature.
std::vector<double> lswe_backtrack(const TravellingWaveSpec& spec, double t_event);

TimeSeries lswe_initial_condition(const TravellingWaveSpec& spec, double t_event,
                                  const UniformGrid& x);

struct TravellingWaveFit {
  FitResult fit;
  TravellingWaveSpec spec;
};

// Least squares over the offsets and amplitudes; c and width are held fixed.
TravellingWaveFit fit_travelling_wave(const TimeSeries& cropped, double L,
                                      const TravellingWaveSpec& guess, std::size_t taper = 5);

// Shape-preserving back-tracking of a buoy record at x_buoy: the sample that
// passes the buoy at time t was at x_buoy + c (t - t_event) at the event.
TimeSeries travelling_profile(const TimeSeries& record, double c, double x_buoy, double t_event,
                              const UniformGrid& x);

struct ModelComparison {
  std::vector<double> peak_offsets;      // position in b minus position in a, per crest
  std::vector<double> amplitude_ratios;  // crest height in b over a
  double l2_distance = 0.0;              // sqrt(sum (a - b)^2 dx)
};

// Crests are local maxima above 5% of the largest one, located to sub-cell
// accuracy and paired in order of position.
ModelComparison compare_models(const TimeSeries& a, const TimeSeries& b);

struct Crest {
  double position;
  double height;
};
std::vector<Crest> find_crests(const TimeSeries& s, double relative_threshold = 0.05);

}  // namespace runup
