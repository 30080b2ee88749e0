#pragma once

#include <cstdint>
#include <string>

#include "velvetkit/analysis.hpp"
#include "velvetkit/audio_buffer.hpp"
#include "velvetkit/fvn.hpp"

namespace velvetkit {

// An all-pass key: filtering with it is inaudible level-wise but smears the
// waveform; filtering with the time-reversed key undoes it exactly (up to a
// known delay), restoring the original's impulsive structure.
struct HidingKey {
  FvnUnit unit;
  std::string key_id;
};

// Designs a key whose impulse response has the requested spread. phi_max on
// the full [-pi, pi) range gives the response a near-Gaussian amplitude
// distribution, so the filtered signal carries no trace of the key's sign
// pattern. k_dft defaults to the next power of two covering 64 spreads.
HidingKey make_key(double sigma_t_s, double sample_rate, std::uint64_t seed,
                   const std::string& key_id, std::size_t k_dft = 0);

// Preset used by the examples: a 1 ms spread, enough to pull the kurtosis of
// a dense velvet stream down to the Gaussian range.
HidingKey depuzzling_key(double sample_rate, std::uint64_t seed,
                         const std::string& key_id);

// y = x * key (overlap-add). Output has length |x| + K - 1 and a K/2-sample
// latency to the key's center.
AudioBuffer apply_allpass(const AudioBuffer& x, const HidingKey& key);

// Filters with the time-reversed key and crops the accumulated K - 1 delay,
// returning exactly |y| - (K - 1) samples: a roundtrip recover(apply(x))
// reproduces x to numerical precision.
AudioBuffer recover(const AudioBuffer& y, const HidingKey& key);

struct TamperReport {
  bool intact = false;
  double exceedance = 0.0;  // fraction of frames with kurtosis > threshold
};

struct TamperConfig {
  KurtosisConfig kurtosis;
  double min_exceedance = 0.005;  // intact if at least this many frames fire
};

// Recovers with the claimed key and checks whether the impulsive structure
// reappears. A wrong key, or a signal that was never filtered, leaves the
// running kurtosis in the Gaussian range.
TamperReport detect_tamper(const AudioBuffer& y, const HidingKey& key,
                           const TamperConfig& config = {});

std::string verdict_line(const TamperReport& report);

}  // namespace velvetkit
