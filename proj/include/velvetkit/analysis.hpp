#pragma once

#include <cstddef>
#include <vector>

#include "velvetkit/audio_buffer.hpp"
#include "velvetkit/dft.hpp"
#include "velvetkit/fvn.hpp"

namespace velvetkit {

// Second-moment duration of a circular-centered impulse response: sample n
// maps to signed time ((n+K/2) mod K - K/2)/fs, origin at the energy
// centroid.
double sigma_t_circular(const Vec& h, double sample_rate);

enum class DurationOrigin { kCentroid, kExplicit };

// Second-moment duration on the linear time axis. With kExplicit the second
// moment is taken about origin_s; with kCentroid about the energy centroid.
double duration(const AudioBuffer& x, DurationOrigin origin,
                double origin_s = 0.0);

// Duration of a rectangle of equal energy: xi = sigma_t / sqrt(1/12).
double erl(double sigma_t_s);

struct GroupDelayCurve {
  std::vector<double> frequencies_hz;
  std::vector<double> tau_g_s;
};

// tau_g = -d(theta)/d(omega), central differences over the half spectrum
// after standard 2*pi unwrapping (a no-op for phases built here).
GroupDelayCurve group_delay(const PhaseSpec& phase);

struct CentroidIdentity {
  double lhs_s;  // power-weighted mean time
  double rhs_s;  // power-spectrum-weighted mean group delay
};

// The discrete identity: both sides computed independently (time sums vs
// DFT of x and n*x) agree to rounding error.
CentroidIdentity centroid_identity_check(const AudioBuffer& x);

struct KurtosisConfig {
  double window_s = 0.025;  // Hann
  double hop_s = 0.005;
  double threshold = 10.0;
  double decision_level = 0.005;  // exceedance fraction for "intact"
};

// Per-frame kurtosis kappa = mu4/mu2^2 with weights w^n normalized per
// frame. Degenerate frames (mu2 <= 0 or variance below 1e-12*mu2) come back
// as NaN rather than a number.
std::vector<double> running_kurtosis(const AudioBuffer& x,
                                     const KurtosisConfig& config = {});

// Fraction of defined frames with kappa > threshold.
double exceedance_fraction(const std::vector<double>& kappa,
                           double threshold = 10.0);

struct Spectrogram {
  std::vector<double> times_s;
  std::vector<double> frequencies_hz;
  std::vector<Vec> power;  // power[frame][bin], |STFT|^2 (Nuttall window)
};

Spectrogram spectrogram(const AudioBuffer& x, double window_s = 0.020,
                        double hop_s = 0.0005);

// Sorted samples standardized to zero mean, unit variance.
Vec level_distribution(const Vec& x);

// Kolmogorov-Smirnov distance between the standardized empirical CDF and
// the normal CDF.
double ks_distance_vs_gaussian(const Vec& x);

// Hann-windowed Welch average, 50% overlap. remove_mean subtracts each
// segment's mean first (pulse trains carry a deterministic DC offset).
Vec welch_psd(const Vec& x, std::size_t segment_len, bool remove_mean);

// Autocorrelation at one lag, normalized by the zero-lag energy.
double autocorrelation_at(const Vec& x, std::size_t lag);

}  // namespace velvetkit
