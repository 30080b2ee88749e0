#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "velvetkit/dft.hpp"
#include "velvetkit/rng.hpp"

namespace velvetkit {

struct FvnParams {
  double b_hz = 200.0;     // phase-smoother bandwidth (half-width)
  double fd_hz = 40.0;     // smoother spacing: one center per fd_hz segment
  double phi_max = std::numbers::pi / 2;
  std::size_t k_dft = 16384;
  double sample_rate = 44100.0;
};

// Throws std::invalid_argument unless 0 < fd <= b, fd >= 1 Hz (the velvet
// placement rule needs fd-1 >= 0), K even and positive, sample_rate > 0.
void validate(const FvnParams& params);

// Phase over the non-negative half spectrum, K/2+1 bins; ends pinned to 0 so
// the full circular spectrum is odd-symmetric and the signal real.
struct PhaseSpec {
  std::vector<double> phase;
  double sample_rate = 44100.0;

  std::size_t k_dft() const { return 2 * (phase.size() - 1); }
};

struct SmootherPlacement {
  double center_hz;   // velvet-randomized, clamped to >= 1 Hz
  double scale_rad;   // uniform on (-phi_max, +phi_max)
};

// One smoother per fd_hz-wide segment of [0, fs/2): center at
// max(1, floor(m*fd + r1*(fd-1) + 0.5)) Hz, scale (2*r2-1)*phi_max.
// Draws r1 then r2 per segment.
std::vector<SmootherPlacement> allocate_centers(const FvnParams& params,
                                                UniformSource& rng);

// Superpose scale * w((k - c)/B) at every placement and its negated mirror
// image, then truncate to the half spectrum with ends forced to zero.
PhaseSpec accumulate_phase(const FvnParams& params,
                           const std::vector<SmootherPlacement>& placements);

PhaseSpec design_phase(const FvnParams& params, UniformSource& rng);

// Inverse transform of exp(j*phase): a unit-energy all-pass impulse
// response, centered at circular index 0.
Vec synthesize_from_phase(const PhaseSpec& phase);

struct FvnUnit {
  Vec h;  // impulse response, circular-centered at index 0
  FvnParams params;
  std::uint64_t seed = 0;
  double sigma_t = 0.0;  // measured second-moment duration, seconds
};

FvnUnit synthesize_unit(const FvnParams& params, std::uint64_t seed);

// Duration law B = 0.522/sigma_t and its inverse.
double bandwidth_for_duration(double sigma_t_s);
double duration_for_bandwidth(double b_hz);

// Adds pi to interior bins: time-domain polarity flip (up to a 2/K residue
// on two samples) that keeps DC/Nyquist at zero, so morph interpolation
// against a flipped phase stays real for every ratio.
void flip_polarity(PhaseSpec& phase);

}  // namespace velvetkit
