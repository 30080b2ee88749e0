#include "velvetkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace velvetkit {

namespace {
constexpr double kPi = std::numbers::pi;

double normal_cdf(double v) { return 0.5 * std::erfc(-v / std::numbers::sqrt2); }
}  // namespace

double sigma_t_circular(const Vec& h, double sample_rate) {
  if (h.empty()) throw std::invalid_argument("sigma_t_circular: empty input");
  const auto k = static_cast<long long>(h.size());
  double energy = 0.0, mean = 0.0;
  for (long long n = 0; n < k; ++n) {
    const double t =
        static_cast<double>((n + k / 2) % k - k / 2) / sample_rate;
    const double p = h[static_cast<std::size_t>(n)] *
                     h[static_cast<std::size_t>(n)];
    energy += p;
    mean += t * p;
  }
  if (!(energy > 0))
    throw std::invalid_argument("sigma_t_circular: zero energy");
  mean /= energy;
  double second = 0.0;
  for (long long n = 0; n < k; ++n) {
    const double t =
        static_cast<double>((n + k / 2) % k - k / 2) / sample_rate;
    const double p = h[static_cast<std::size_t>(n)] *
                     h[static_cast<std::size_t>(n)];
    second += (t - mean) * (t - mean) * p;
  }
  return std::sqrt(second / energy);
}

double duration(const AudioBuffer& x, DurationOrigin origin, double origin_s) {
  if (x.samples.empty()) throw std::invalid_argument("duration: empty input");
  double energy = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < x.samples.size(); ++n) {
    const double t = static_cast<double>(n) / x.sample_rate;
    const double p = x.samples[n] * x.samples[n];
    energy += p;
    mean += t * p;
  }
  if (!(energy > 0)) throw std::invalid_argument("duration: zero energy");
  const double center =
      origin == DurationOrigin::kCentroid ? mean / energy : origin_s;
  double second = 0.0;
  for (std::size_t n = 0; n < x.samples.size(); ++n) {
    const double t = static_cast<double>(n) / x.sample_rate - center;
    second += t * t * x.samples[n] * x.samples[n];
  }
  return std::sqrt(second / energy);
}

double erl(double sigma_t_s) {
  if (sigma_t_s < 0) throw std::invalid_argument("erl: negative duration");
  return sigma_t_s * std::sqrt(12.0);
}

GroupDelayCurve group_delay(const PhaseSpec& phase) {
  const std::size_t half = phase.phase.size();
  const std::size_t k = phase.k_dft();
  Vec theta = phase.phase;
  for (std::size_t i = 1; i < half; ++i) {  // 2*pi jump correction
    double d = theta[i] - theta[i - 1];
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    theta[i] = theta[i - 1] + d;
  }
  const double domega =
      2.0 * kPi * phase.sample_rate / static_cast<double>(k);
  GroupDelayCurve curve;
  curve.frequencies_hz.resize(half);
  curve.tau_g_s.resize(half);
  for (std::size_t i = 0; i < half; ++i) {
    curve.frequencies_hz[i] =
        static_cast<double>(i) * phase.sample_rate / static_cast<double>(k);
    double dtheta;
    if (i == 0) {
      dtheta = theta[1] - theta[0];
    } else if (i + 1 == half) {
      dtheta = theta[i] - theta[i - 1];
    } else {
      dtheta = (theta[i + 1] - theta[i - 1]) / 2.0;
    }
    curve.tau_g_s[i] = -dtheta / domega;
  }
  return curve;
}

CentroidIdentity centroid_identity_check(const AudioBuffer& x) {
  if (x.samples.empty())
    throw std::invalid_argument("centroid_identity_check: empty input");
  double energy = 0.0, lhs = 0.0;
  for (std::size_t n = 0; n < x.samples.size(); ++n) {
    const double p = x.samples[n] * x.samples[n];
    energy += p;
    lhs += static_cast<double>(n) * p;
  }
  if (!(energy > 0))
    throw std::invalid_argument("centroid_identity_check: zero energy");
  lhs /= energy;

  // rhs from the spectra of x and n*x: per-bin group delay in samples is
  // Re(Y conj(X))/|X|^2; weight by |X|^2 and average.
  Vec nx(x.samples.size());
  for (std::size_t n = 0; n < nx.size(); ++n) {
    nx[n] = static_cast<double>(n) * x.samples[n];
  }
  // Full spectrum via the half spectrum: real input makes the negative bins
  // conjugate mirrors, so sum positive bins with mirror weights.
  const CVec xf = rfft(x.samples);
  const CVec yf = rfft(nx);
  const std::size_t n_len = x.samples.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xf.size(); ++i) {
    const bool interior = i != 0 && !(n_len % 2 == 0 && i + 1 == xf.size());
    const double w = interior ? 2.0 : 1.0;  // mirrored bins count twice
    num += w * (yf[i] * std::conj(xf[i])).real();
    den += w * std::norm(xf[i]);
  }
  const double rhs = num / den;
  return {lhs / x.sample_rate, rhs / x.sample_rate};
}

std::vector<double> running_kurtosis(const AudioBuffer& x,
                                     const KurtosisConfig& config) {
  const auto n_win =
      static_cast<std::size_t>(std::lround(config.window_s * x.sample_rate));
  const auto hop =
      static_cast<std::size_t>(std::lround(config.hop_s * x.sample_rate));
  if (n_win < 4)
    throw std::invalid_argument("running_kurtosis: window shorter than 4");
  if (hop == 0) throw std::invalid_argument("running_kurtosis: zero hop");

  Vec w1(n_win), w2(n_win), w4(n_win);
  double s1 = 0, s2 = 0, s4 = 0;
  for (std::size_t n = 0; n < n_win; ++n) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * kPi *
                                          (static_cast<double>(n) + 0.5) /
                                          static_cast<double>(n_win));
    w1[n] = w;
    w2[n] = w * w;
    w4[n] = w * w * w * w;
    s1 += w1[n];
    s2 += w2[n];
    s4 += w4[n];
  }
  for (std::size_t n = 0; n < n_win; ++n) {
    w1[n] /= s1;
    w2[n] /= s2;
    w4[n] /= s4;
  }

  std::vector<double> kappa;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t start = 0; start + n_win <= x.samples.size();
       start += hop) {
    double m1 = 0, mu2 = 0, mu4 = 0;
    for (std::size_t n = 0; n < n_win; ++n) {
      const double s = x.samples[start + n];
      m1 += w1[n] * s;
      mu2 += w2[n] * s * s;
      mu4 += w4[n] * s * s * s * s;
    }
    const bool degenerate = !(mu2 > 0) || (mu2 - m1 * m1) <= 1e-12 * mu2;
    kappa.push_back(degenerate ? nan : mu4 / (mu2 * mu2));
  }
  return kappa;
}

double exceedance_fraction(const std::vector<double>& kappa,
                           double threshold) {
  std::size_t defined = 0, above = 0;
  for (double k : kappa) {
    if (std::isnan(k)) continue;
    ++defined;
    if (k > threshold) ++above;
  }
  if (defined == 0) return 0.0;
  return static_cast<double>(above) / static_cast<double>(defined);
}

Spectrogram spectrogram(const AudioBuffer& x, double window_s, double hop_s) {
  const auto n_win =
      static_cast<std::size_t>(std::lround(window_s * x.sample_rate));
  const auto hop =
      static_cast<std::size_t>(std::lround(hop_s * x.sample_rate));
  if (!(n_win > hop && hop > 0))
    throw std::invalid_argument("spectrogram: need window > hop > 0");
  if (x.samples.size() < n_win)
    throw std::invalid_argument("spectrogram: signal shorter than one window");

  // Nuttall window (minimum 4-term Blackman-Harris family).
  Vec w(n_win);
  for (std::size_t n = 0; n < n_win; ++n) {
    const double u = 2.0 * kPi * static_cast<double>(n) /
                     static_cast<double>(n_win - 1);
    w[n] = 0.3635819 - 0.4891775 * std::cos(u) + 0.1365995 * std::cos(2 * u) -
           0.0106411 * std::cos(3 * u);
  }

  Spectrogram out;
  const std::size_t n_fft = next_pow2(n_win);
  for (std::size_t i = 0; i <= n_fft / 2; ++i) {
    out.frequencies_hz.push_back(static_cast<double>(i) * x.sample_rate /
                                 static_cast<double>(n_fft));
  }
  Vec frame(n_fft, 0.0);
  for (std::size_t start = 0; start + n_win <= x.samples.size();
       start += hop) {
    std::fill(frame.begin(), frame.end(), 0.0);
    for (std::size_t n = 0; n < n_win; ++n) {
      frame[n] = x.samples[start + n] * w[n];
    }
    const CVec spec = rfft(frame);
    Vec power(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) power[i] = std::norm(spec[i]);
    out.power.push_back(std::move(power));
    out.times_s.push_back(
        (static_cast<double>(start) + static_cast<double>(n_win) / 2.0) /
        x.sample_rate);
  }
  return out;
}

Vec level_distribution(const Vec& x) {
  if (x.empty()) throw std::invalid_argument("level_distribution: empty input");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  if (!(var > 0))
    throw std::invalid_argument("level_distribution: degenerate input");
  const double inv = 1.0 / std::sqrt(var);
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) * inv;
  std::sort(out.begin(), out.end());
  return out;
}

double ks_distance_vs_gaussian(const Vec& x) {
  const Vec v = level_distribution(x);
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double c = normal_cdf(v[i]);
    d = std::max(d, std::abs(c - static_cast<double>(i) / n));
    d = std::max(d, std::abs(c - static_cast<double>(i + 1) / n));
  }
  return d;
}

Vec welch_psd(const Vec& x, std::size_t segment_len, bool remove_mean) {
  if (segment_len < 2 || x.size() < segment_len)
    throw std::invalid_argument("welch_psd: signal shorter than one segment");
  Vec w(segment_len);
  double wss = 0.0;
  for (std::size_t n = 0; n < segment_len; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(n) /
                                static_cast<double>(segment_len));
    wss += w[n] * w[n];
  }
  Vec acc(segment_len / 2 + 1, 0.0);
  std::size_t count = 0;
  Vec seg(segment_len);
  for (std::size_t start = 0; start + segment_len <= x.size();
       start += segment_len / 2) {
    double mean = 0.0;
    if (remove_mean) {
      for (std::size_t n = 0; n < segment_len; ++n) mean += x[start + n];
      mean /= static_cast<double>(segment_len);
    }
    for (std::size_t n = 0; n < segment_len; ++n) {
      seg[n] = (x[start + n] - mean) * w[n];
    }
    const CVec spec = rfft(seg);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(spec[i]);
    ++count;
  }
  for (double& v : acc) v /= static_cast<double>(count) * wss;
  return acc;
}

double autocorrelation_at(const Vec& x, std::size_t lag) {
  if (x.size() <= lag)
    throw std::invalid_argument("autocorrelation_at: lag beyond signal");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + lag < x.size(); ++i) num += x[i] * x[i + lag];
  for (double v : x) den += v * v;
  if (!(den > 0)) return 0.0;
  return num / den;
}

}  // namespace velvetkit
