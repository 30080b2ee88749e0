#include "velvetkit/hiding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "velvetkit/dft.hpp"

namespace velvetkit {

namespace {
// Key response rotated from circular center 0 to linear center K/2, so
// overlap-add convolution sees an ordinary FIR with its peak mid-buffer.
Vec centered_response(const FvnUnit& unit) {
  const std::size_t k = unit.h.size();
  Vec h(k);
  for (std::size_t i = 0; i < k; ++i) h[i] = unit.h[(i + k / 2) % k];
  return h;
}
}  // namespace

HidingKey make_key(double sigma_t_s, double sample_rate, std::uint64_t seed,
                   const std::string& key_id, std::size_t k_dft) {
  if (!(sigma_t_s > 0))
    throw std::invalid_argument("make_key: spread must be > 0");
  FvnParams params;
  params.phi_max = std::numbers::pi;
  params.sample_rate = sample_rate;
  // Spread constant for the full-range phase regime: sigma_t = 1.3368 / B.
  params.b_hz = 1.3368 / sigma_t_s;
  params.fd_hz = params.b_hz / 5.0;
  params.k_dft =
      k_dft ? k_dft
            : next_pow2(static_cast<std::size_t>(
                  std::max(2.0, std::ceil(64.0 * sigma_t_s * sample_rate))));
  validate(params);
  return HidingKey{synthesize_unit(params, seed), key_id};
}

HidingKey depuzzling_key(double sample_rate, std::uint64_t seed,
                         const std::string& key_id) {
  return make_key(1e-3, sample_rate, seed, key_id, 4096);
}

AudioBuffer apply_allpass(const AudioBuffer& x, const HidingKey& key) {
  if (x.samples.empty())
    throw std::invalid_argument("apply_allpass: empty input");
  if (x.sample_rate != key.unit.params.sample_rate)
    throw std::invalid_argument("apply_allpass: sample rate mismatch");
  AudioBuffer y;
  y.sample_rate = x.sample_rate;
  y.samples = overlap_add_convolve(x.samples, centered_response(key.unit));
  return y;
}

AudioBuffer recover(const AudioBuffer& y, const HidingKey& key) {
  const std::size_t k = key.unit.h.size();
  if (y.samples.size() < k)
    throw std::invalid_argument("recover: input shorter than the key");
  Vec rev = centered_response(key.unit);
  std::reverse(rev.begin(), rev.end());
  const Vec full = overlap_add_convolve(y.samples, rev);
  AudioBuffer x;
  x.sample_rate = y.sample_rate;
  // Forward + reverse passes delay by K - 1 total; the tail past the
  // original length holds only roundtrip leakage.
  x.samples.assign(full.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   full.begin() + static_cast<std::ptrdiff_t>(
                                      y.samples.size()));
  return x;
}

TamperReport detect_tamper(const AudioBuffer& y, const HidingKey& key,
                           const TamperConfig& config) {
  AudioBuffer x = recover(y, key);
  // Drop the partial-kernel ramps at both ends: a mismatched key leaves
  // variance ramps there that fire the kurtosis test spuriously.
  const std::size_t k = key.unit.h.size();
  if (x.samples.size() > 4 * k) {
    x.samples.erase(x.samples.begin(),
                    x.samples.begin() + static_cast<std::ptrdiff_t>(k));
    x.samples.resize(x.samples.size() - k);
  }
  const std::vector<double> kurt = running_kurtosis(x, config.kurtosis);
  TamperReport report;
  report.exceedance =
      exceedance_fraction(kurt, config.kurtosis.threshold);
  report.intact = report.exceedance >= config.min_exceedance;
  return report;
}

std::string verdict_line(const TamperReport& report) {
  std::ostringstream os;
  os << "verdict=" << (report.intact ? "intact" : "suspect")
     << " exceedance=" << report.exceedance;
  return os.str();
}

}  // namespace velvetkit
