#pragma once

#include <array>
#include <cstddef>

#include "velvetkit/dft.hpp"

namespace velvetkit {

// Cosine-series phase-manipulation window: w(k) = sum_m a[m]*cos(pi*k*m/B)
// on |k| <= B, identically zero outside. Coefficient invariants:
// sum a = 1 (w(0)=1), alternating sum = 0 (w(+-B)=0).
struct CosineSeries {
  std::vector<double> a;
};

// The six-term set: -114 dB peak sidelobe, about -54 dB/oct decay.
const CosineSeries& six_term_series();

// Single-coefficient series {1}: a plain rectangle, for comparison tests.
const CosineSeries& rectangle_series();

// Evaluate at a real-valued (possibly fractional) bin offset.
double phase_window(double k, double b_bins, const CosineSeries& series);
double phase_window(double k, double b_bins);  // six-term

// Streams w(d0), w(d0+1), ... via coupled rotation recurrences, zero outside
// the support like phase_window; equal to the direct evaluation within
// ~1e-13 over <=100 steps (see test_core_math) and far cheaper than
// per-sample cos() in the phase-design hot loop.
class PhaseWindowScan {
 public:
  PhaseWindowScan(double d0, double b_bins, const CosineSeries& series);
  double next();

 private:
  std::array<double, 8> cos_{};
  std::array<double, 8> sin_{};
  std::array<double, 8> rot_cos_{};
  std::array<double, 8> rot_sin_{};
  const double* a_;
  std::size_t m_;
  double k_ = 0.0;
  double b_ = 0.0;
};

struct SidelobeMetrics {
  double peak_sidelobe_db;
  double decay_rate_db_per_octave;
};

// Zero-padded transform of the window sampled at 4 points/bin over a
// +-48-bin support; decay fitted to sidelobe peaks over the top three
// octaves below the sampled grid's Nyquist.
SidelobeMetrics sidelobe_metrics(const CosineSeries& series,
                                 int oversampling = 16);

// Inverse DFT of exp(j*phi_scale*w(k - k_c)) over the circular bin axis
// (complex-valued; a single phase smoother is not conjugate-symmetric).
CVec unit_allpass_response(double k_c, double b_bins, std::size_t k_dft,
                           double phi_scale);

}  // namespace velvetkit
