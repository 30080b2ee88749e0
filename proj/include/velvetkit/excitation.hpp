#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "velvetkit/audio_buffer.hpp"
#include "velvetkit/fvn.hpp"

namespace velvetkit {

struct F0Trajectory {
  double f_base_hz = 100.0;
  double vibrato_rate_hz = 0.0;
  double vibrato_depth_cent = 0.0;
};

void validate(const F0Trajectory& traj);

// f0(t) = f_base * 2^((depth/1200) * sin(2*pi*rate*t)), sampled per sample.
Vec f0_with_vibrato(const F0Trajectory& traj, std::size_t n_samples,
                    double sample_rate);

// Pitch epochs as fractional sample positions: integer crossings of the
// cumulative instantaneous phase (first epoch at sample 0).
std::vector<double> extract_epochs(const F0Trajectory& traj,
                                   std::size_t n_samples, double sample_rate);

// Overlap-add one unit per epoch, each unit rotated from circular center 0
// to its (fractional) epoch position by a bin-domain linear phase.
// phase_for_epoch(e) supplies that epoch's half-spectrum phase.
AudioBuffer assemble_ifvn(
    const std::function<const PhaseSpec&(std::size_t)>& phase_for_epoch,
    const F0Trajectory& f0, double length_s, double sample_rate,
    std::size_t k_dft);

// The same unit at every epoch: clearly pitched by construction.
AudioBuffer frozen_ifvn(const PhaseSpec& unit_phase, const F0Trajectory& f0,
                        double length_s);

// A fresh seed per epoch (derived from master_seed) plus a random polarity
// flip; with unit duration beyond the period this approaches stationary
// noise.
AudioBuffer random_ifvn(const FvnParams& params, const F0Trajectory& f0,
                        double length_s, std::uint64_t master_seed);

// Bin-wise linear interpolation r*random + (1-r)*frozen; r=0 and r=1
// reproduce the inputs bit-exactly.
PhaseSpec morph_unit(const PhaseSpec& theta_frozen,
                     const PhaseSpec& theta_random, double r);

// Morphed train: constant r, or r(t) evaluated at each epoch time.
AudioBuffer morph_ifvn(const PhaseSpec& frozen, const FvnParams& params,
                       const F0Trajectory& f0, double length_s,
                       std::uint64_t master_seed,
                       const std::function<double(double)>& r_of_t);

struct PrCalibration {
  std::vector<double> r_grid;
  std::vector<double> g_db;  // periodic-to-random power ratio, dB
};

// Periodic component := across-seed mean waveform (frozen phase fixed),
// random := residual about it; G = 10log10(|periodic|^2 / mean |residual|^2),
// capped at +80 dB where the residual vanishes (r=0). Throws if the measured
// curve is not strictly decreasing (raise n_seeds).
PrCalibration calibrate_pr_ratio(const FvnParams& params,
                                 const F0Trajectory& f0,
                                 const PhaseSpec& frozen,
                                 const std::vector<double>& r_grid,
                                 std::size_t n_seeds, double length_s,
                                 std::uint64_t master_seed);

// Morph ratio realizing a requested periodic-to-random ratio, by monotone
// linear interpolation of the calibration table.
double invert_pr(const PrCalibration& cal, double eta_db);

// One scaled burst per pitch period at the given intra-period phase.
AudioBuffer place_bursts(const AudioBuffer& carrier, const F0Trajectory& f0,
                         const FvnUnit& burst, double phase_in_period,
                         double gain);

}  // namespace velvetkit
