#pragma once

#include <variant>
#include <vector>

#include "velvetkit/fvn.hpp"

namespace velvetkit {

// Target duration rises from b_min below f_c to b_max above it:
// ((1-c)/(1+exp(-(f-f_c)/f_tr)) + c) * b_max with c = b_min/b_max.
// The floor keeps the warp integrand positive.
struct SigmoidProfile {
  double f_c_hz;
  double f_tr_hz;
  double b_max_s;
  double b_min_s;
};

// Piecewise-constant per-band durations, smoothed at interior boundaries by
// a unit-area raised cosine of support [-f_w/2, f_w/2].
struct BandProfile {
  std::vector<double> boundaries_hz;  // strictly increasing, first = 0
  std::vector<double> durations_s;    // one per band, all > 0
  double smoother_width_hz = 0.0;
};

using DurationProfile = std::variant<SigmoidProfile, BandProfile>;

void validate(const DurationProfile& profile);

// Target duration at f. Band boundaries transition via the smoother's CDF,
// so equal durations produce an exactly constant profile.
double evaluate_profile(const DurationProfile& profile, double f_hz);

double max_duration(const DurationProfile& profile);

// nu(f) = alpha * integral g, g = duration(f)/max duration, alpha scaled so
// nu(fs/2) = fs/2. Evaluated per DFT bin (one grid point per bin).
struct WarpMap {
  std::vector<double> nu_bins;  // warped position of bin i, in bins
  double alpha = 1.0;
};

WarpMap build_warp_map(const DurationProfile& profile, double sample_rate,
                       std::size_t k_dft);

// Constant-duration phase designed on the warped axis (duration
// max_duration/alpha so the max-g band lands on its target), read back
// through nu by linear interpolation. params supplies phi_max, K, sample
// rate and the fd/B ratio; its b_hz/fd_hz magnitudes are replaced by the
// warped-axis bandwidth.
PhaseSpec design_ffvn_phase(const DurationProfile& profile,
                            const FvnParams& params, UniformSource& rng);

FvnUnit synthesize_ffvn_unit(const DurationProfile& profile,
                             const FvnParams& params, std::uint64_t seed);

}  // namespace velvetkit
