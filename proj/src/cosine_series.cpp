#include "velvetkit/cosine_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace velvetkit {

namespace {
constexpr double kPi = std::numbers::pi;
}

const CosineSeries& six_term_series() {
  static const CosineSeries s{{0.2624710164, 0.4265335164, 0.2250165621,
                               0.0726831633, 0.0125124215, 0.0007833203}};
  return s;
}

const CosineSeries& rectangle_series() {
  static const CosineSeries s{{1.0}};
  return s;
}

double phase_window(double k, double b_bins, const CosineSeries& series) {
  if (!(b_bins > 0)) throw std::invalid_argument("phase_window: B must be > 0");
  if (std::abs(k) > b_bins) return 0.0;
  double w = 0.0;
  for (std::size_t m = 0; m < series.a.size(); ++m) {
    w += series.a[m] * std::cos(kPi * k * static_cast<double>(m) / b_bins);
  }
  return w;
}

double phase_window(double k, double b_bins) {
  return phase_window(k, b_bins, six_term_series());
}

PhaseWindowScan::PhaseWindowScan(double d0, double b_bins,
                                 const CosineSeries& series)
    : a_(series.a.data()), m_(series.a.size()), k_(d0), b_(b_bins) {
  if (!(b_bins > 0))
    throw std::invalid_argument("PhaseWindowScan: B must be > 0");
  for (std::size_t m = 0; m < m_; ++m) {
    const double th0 = kPi * d0 * static_cast<double>(m) / b_bins;
    const double dth = kPi * static_cast<double>(m) / b_bins;
    cos_[m] = std::cos(th0);
    sin_[m] = std::sin(th0);
    rot_cos_[m] = std::cos(dth);
    rot_sin_[m] = std::sin(dth);
  }
}

double PhaseWindowScan::next() {
  // outside the support the series repeats with period 2B; the window is 0
  const bool inside = std::abs(k_) <= b_;
  k_ += 1.0;
  double w = 0.0;
  for (std::size_t m = 0; m < m_; ++m) {
    w += a_[m] * cos_[m];
    const double c = cos_[m] * rot_cos_[m] - sin_[m] * rot_sin_[m];
    sin_[m] = sin_[m] * rot_cos_[m] + cos_[m] * rot_sin_[m];
    cos_[m] = c;
  }
  return inside ? w : 0.0;
}

SidelobeMetrics sidelobe_metrics(const CosineSeries& series,
                                 int oversampling) {
  if (oversampling < 16)
    throw std::invalid_argument("sidelobe_metrics: oversampling must be >= 16");
  const int support_bins = 48;  // wide enough that decay, not truncation, wins
  const int per_bin = 4;
  const int half = support_bins * per_bin;
  Vec w(2 * half + 1);
  for (int i = 0; i <= 2 * half; ++i) {
    const double k = static_cast<double>(i - half) / per_bin;
    w[static_cast<std::size_t>(i)] = phase_window(k, support_bins, series);
  }
  const std::size_t padded =
      next_pow2(w.size() * static_cast<std::size_t>(oversampling));
  Vec wp(padded, 0.0);
  std::copy(w.begin(), w.end(), wp.begin());
  CVec spectrum = rfft(wp);

  Vec db(spectrum.size());
  const double ref = std::abs(spectrum[0]);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    db[i] = 20.0 * std::log10(std::max(std::abs(spectrum[i]) / ref, 1e-300));
  }

  // Sidelobes start past the first local minimum (the main-lobe null).
  std::size_t first_min = 0;
  for (std::size_t i = 1; i + 1 < db.size(); ++i) {
    if (db[i] < db[i - 1] && db[i] <= db[i + 1]) {
      first_min = i;
      break;
    }
  }
  double peak_db = -1e9;
  std::vector<double> freqs, levels;  // cycles/bin, dB
  for (std::size_t i = first_min + 1; i + 1 < db.size(); ++i) {
    if (db[i] > db[i - 1] && db[i] >= db[i + 1]) {
      peak_db = std::max(peak_db, db[i]);
      freqs.push_back(static_cast<double>(i) / static_cast<double>(padded) *
                      per_bin);
      levels.push_back(db[i]);
    }
  }

  // Straight-line fit of level vs log2(frequency) over [Nyq/8, Nyq].
  const double nyq = 0.5;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (freqs[i] < nyq / 8 || freqs[i] > nyq) continue;
    const double x = std::log2(freqs[i]);
    sx += x;
    sy += levels[i];
    sxx += x * x;
    sxy += x * levels[i];
    ++n;
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  const double slope =
      (static_cast<double>(n) * sxy - sx * sy) / (denom != 0 ? denom : 1.0);
  return {peak_db, slope};
}

CVec unit_allpass_response(double k_c, double b_bins, std::size_t k_dft,
                           double phi_scale) {
  if (k_dft == 0)
    throw std::invalid_argument("unit_allpass_response: K must be positive");
  if (!(b_bins >= 1))
    throw std::invalid_argument("unit_allpass_response: B must be >= 1");
  const double kd = static_cast<double>(k_dft);
  CVec spectrum(k_dft);
  for (std::size_t k = 0; k < k_dft; ++k) {
    double d = static_cast<double>(k) - k_c;
    d -= kd * std::round(d / kd);  // circular distance
    const double phi = phi_scale * phase_window(d, b_bins, six_term_series());
    spectrum[k] = std::polar(1.0, phi);
  }
  return ifft(spectrum);
}

}  // namespace velvetkit
