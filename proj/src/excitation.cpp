#include "velvetkit/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "velvetkit/dft.hpp"

namespace velvetkit {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPrCapDb = 80.0;  // reported where the residual vanishes

// Unit waveform moved from circular center 0 to linear center K/2 + frac.
// A real fractional delay has no phase to give the Nyquist bin; scaling it
// by cos(pi*frac) is the unique real choice continuous in frac, so integer
// placements stay exact and energy varies by at most 1/K across fractions.
Vec shifted_unit(const PhaseSpec& phase, double frac) {
  const std::size_t half = phase.phase.size() - 1;
  const std::size_t k = 2 * half;
  CVec spectrum(half + 1);
  const double shift = static_cast<double>(k) / 2.0 + frac;
  for (std::size_t i = 0; i < half; ++i) {
    spectrum[i] = std::polar(
        1.0, phase.phase[i] -
                 2.0 * kPi * static_cast<double>(i) * shift /
                     static_cast<double>(k));
  }
  const double nyq_sign = half % 2 == 0 ? 1.0 : -1.0;  // e^{-j*pi*K/2}
  spectrum[half] = std::polar(1.0, phase.phase[half]) * nyq_sign *
                   std::cos(kPi * frac);
  return irfft(spectrum, k);
}
}  // namespace

void validate(const F0Trajectory& traj) {
  if (!(traj.f_base_hz > 0))
    throw std::invalid_argument("F0Trajectory: f_base must be > 0");
  if (traj.vibrato_depth_cent < 0)
    throw std::invalid_argument("F0Trajectory: vibrato depth must be >= 0");
}

Vec f0_with_vibrato(const F0Trajectory& traj, std::size_t n_samples,
                    double sample_rate) {
  validate(traj);
  Vec f0(n_samples);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    f0[n] = traj.f_base_hz *
            std::exp2((traj.vibrato_depth_cent / 1200.0) *
                      std::sin(2.0 * kPi * traj.vibrato_rate_hz * t));
  }
  return f0;
}

std::vector<double> extract_epochs(const F0Trajectory& traj,
                                   std::size_t n_samples,
                                   double sample_rate) {
  validate(traj);
  const double f_max =
      traj.f_base_hz * std::exp2(traj.vibrato_depth_cent / 1200.0);
  if (sample_rate / f_max < 2.0)
    throw std::invalid_argument("extract_epochs: epoch spacing < 2 samples");
  const Vec f0 = f0_with_vibrato(traj, n_samples, sample_rate);
  std::vector<double> epochs;
  epochs.push_back(0.0);  // cumulative phase starts at zero: first epoch
  // compensated summation: plain accumulation drifts by ~n*eps, which the
  // fractional placement would faithfully turn into timing jitter
  double p = 0.0;
  double carry = 0.0;
  double m_next = 1.0;
  for (std::size_t n = 0; n + 1 < n_samples; ++n) {
    const double step = f0[n] / sample_rate + carry;
    const double p_next = p + step;
    carry = step - (p_next - p);
    while (m_next <= p_next) {
      epochs.push_back(static_cast<double>(n) + (m_next - p) / (p_next - p));
      m_next += 1.0;
    }
    p = p_next;
  }
  return epochs;
}

AudioBuffer assemble_ifvn(
    const std::function<const PhaseSpec&(std::size_t)>& phase_for_epoch,
    const F0Trajectory& f0, double length_s, double sample_rate,
    std::size_t k_dft) {
  const auto n_out =
      static_cast<std::size_t>(std::llround(length_s * sample_rate));
  if (n_out == 0) throw std::invalid_argument("assemble_ifvn: empty output");
  // Units whose center falls within half a unit past the end still reach in.
  const std::vector<double> epochs =
      extract_epochs(f0, n_out + k_dft, sample_rate);

  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.assign(n_out, 0.0);
  const auto k_ll = static_cast<long long>(k_dft);
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    const double pos = epochs[e];
    const auto q = static_cast<long long>(std::floor(pos));
    if (q - k_ll / 2 >= static_cast<long long>(n_out)) break;
    const Vec u = shifted_unit(phase_for_epoch(e), pos - std::floor(pos));
    const long long start = q - k_ll / 2;
    const long long lo = std::max(0ll, -start);
    const long long hi =
        std::min(k_ll, static_cast<long long>(n_out) - start);
    for (long long i = lo; i < hi; ++i) {
      out.samples[static_cast<std::size_t>(start + i)] +=
          u[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

AudioBuffer frozen_ifvn(const PhaseSpec& unit_phase, const F0Trajectory& f0,
                        double length_s) {
  return assemble_ifvn([&](std::size_t) -> const PhaseSpec& { return unit_phase; },
                       f0, length_s, unit_phase.sample_rate,
                       unit_phase.k_dft());
}

AudioBuffer random_ifvn(const FvnParams& params, const F0Trajectory& f0,
                        double length_s, std::uint64_t master_seed) {
  PhaseSpec scratch;
  auto make = [&](std::size_t e) -> const PhaseSpec& {
    SplitMix64 rng(derive_seed(master_seed, e));
    scratch = design_phase(params, rng);
    if (rng.next01() < 0.5) flip_polarity(scratch);
    return scratch;
  };
  return assemble_ifvn(make, f0, length_s, params.sample_rate, params.k_dft);
}

PhaseSpec morph_unit(const PhaseSpec& theta_frozen,
                     const PhaseSpec& theta_random, double r) {
  if (theta_frozen.phase.size() != theta_random.phase.size())
    throw std::invalid_argument("morph_unit: mismatched DFT sizes");
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("morph_unit: r must be in [0,1]");
  PhaseSpec out;
  out.sample_rate = theta_frozen.sample_rate;
  out.phase.resize(theta_frozen.phase.size());
  for (std::size_t i = 0; i < out.phase.size(); ++i) {
    out.phase[i] = r * theta_random.phase[i] + (1.0 - r) * theta_frozen.phase[i];
  }
  return out;
}

AudioBuffer morph_ifvn(const PhaseSpec& frozen, const FvnParams& params,
                       const F0Trajectory& f0, double length_s,
                       std::uint64_t master_seed,
                       const std::function<double(double)>& r_of_t) {
  PhaseSpec scratch;
  const std::vector<double> epochs = extract_epochs(
      f0,
      static_cast<std::size_t>(std::llround(length_s * params.sample_rate)) +
          params.k_dft,
      params.sample_rate);
  auto make = [&](std::size_t e) -> const PhaseSpec& {
    SplitMix64 rng(derive_seed(master_seed, e));
    PhaseSpec random = design_phase(params, rng);
    if (rng.next01() < 0.5) flip_polarity(random);
    const double t = epochs[e] / params.sample_rate;
    scratch = morph_unit(frozen, random, r_of_t(t));
    return scratch;
  };
  return assemble_ifvn(make, f0, length_s, params.sample_rate, params.k_dft);
}

PrCalibration calibrate_pr_ratio(const FvnParams& params,
                                 const F0Trajectory& f0,
                                 const PhaseSpec& frozen,
                                 const std::vector<double>& r_grid,
                                 std::size_t n_seeds, double length_s,
                                 std::uint64_t master_seed) {
  if (r_grid.size() < 9)
    throw std::invalid_argument("calibrate_pr_ratio: need >= 9 grid points");
  if (n_seeds < 50)
    throw std::invalid_argument("calibrate_pr_ratio: need >= 50 seeds");
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > r_grid[i - 1]) || r_grid[i] > 1.0 || r_grid.front() < 0.0)
      throw std::invalid_argument("calibrate_pr_ratio: bad r grid");
  }
  const auto n_out =
      static_cast<std::size_t>(std::llround(length_s * params.sample_rate));
  const std::size_t n_epochs =
      extract_epochs(f0, n_out + params.k_dft, params.sample_rate).size();

  std::vector<Vec> s1(r_grid.size(), Vec(n_out, 0.0));
  std::vector<Vec> s2(r_grid.size(), Vec(n_out, 0.0));
  for (std::size_t seed = 0; seed < n_seeds; ++seed) {
    // One set of per-epoch random phases per seed, reused across the grid.
    std::vector<PhaseSpec> randoms;
    randoms.reserve(n_epochs);
    for (std::size_t e = 0; e < n_epochs; ++e) {
      SplitMix64 rng(derive_seed(derive_seed(master_seed, seed), e));
      PhaseSpec ph = design_phase(params, rng);
      if (rng.next01() < 0.5) flip_polarity(ph);
      randoms.push_back(std::move(ph));
    }
    PhaseSpec scratch;
    for (std::size_t ir = 0; ir < r_grid.size(); ++ir) {
      auto make = [&](std::size_t e) -> const PhaseSpec& {
        scratch = morph_unit(frozen, randoms[e], r_grid[ir]);
        return scratch;
      };
      const AudioBuffer y = assemble_ifvn(make, f0, length_s,
                                          params.sample_rate, params.k_dft);
      for (std::size_t n = 0; n < n_out; ++n) {
        s1[ir][n] += y.samples[n];
        s2[ir][n] += y.samples[n] * y.samples[n];
      }
    }
  }

  PrCalibration cal;
  cal.r_grid = r_grid;
  cal.g_db.resize(r_grid.size());
  const double inv_n = 1.0 / static_cast<double>(n_seeds);
  for (std::size_t ir = 0; ir < r_grid.size(); ++ir) {
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < n_out; ++n) {
      const double p = s1[ir][n] * inv_n;
      num += p * p;
      den += std::max(0.0, s2[ir][n] * inv_n - p * p);
    }
    cal.g_db[ir] = (den <= num * 1e-12) ? kPrCapDb
                                        : 10.0 * std::log10(num / den);
  }
  for (std::size_t ir = 1; ir < cal.g_db.size(); ++ir) {
    if (!(cal.g_db[ir] < cal.g_db[ir - 1])) {
      throw std::runtime_error(
          "calibrate_pr_ratio: measured curve not strictly decreasing at r=" +
          std::to_string(cal.r_grid[ir]) + " (" +
          std::to_string(cal.g_db[ir - 1]) + " -> " +
          std::to_string(cal.g_db[ir]) + " dB); raise n_seeds");
    }
  }
  return cal;
}

double invert_pr(const PrCalibration& cal, double eta_db) {
  if (cal.r_grid.empty() || cal.r_grid.size() != cal.g_db.size())
    throw std::invalid_argument("invert_pr: empty calibration");
  if (eta_db >= cal.g_db.front()) return cal.r_grid.front();
  if (eta_db <= cal.g_db.back()) return cal.r_grid.back();
  for (std::size_t i = 1; i < cal.g_db.size(); ++i) {
    if (eta_db >= cal.g_db[i]) {
      const double t =
          (cal.g_db[i - 1] - eta_db) / (cal.g_db[i - 1] - cal.g_db[i]);
      return cal.r_grid[i - 1] + t * (cal.r_grid[i] - cal.r_grid[i - 1]);
    }
  }
  return cal.r_grid.back();
}

AudioBuffer place_bursts(const AudioBuffer& carrier, const F0Trajectory& f0,
                         const FvnUnit& burst, double phase_in_period,
                         double gain) {
  if (carrier.samples.empty())
    throw std::invalid_argument("place_bursts: empty carrier");
  if (!(phase_in_period >= 0.0 && phase_in_period < 1.0))
    throw std::invalid_argument("place_bursts: phase must be in [0,1)");
  AudioBuffer out = carrier;
  if (gain == 0.0) return out;
  const std::vector<double> epochs =
      extract_epochs(f0, carrier.samples.size(), carrier.sample_rate);
  PhaseSpec burst_phase;  // recover the phase from the stored response
  const CVec spectrum = rfft(burst.h);
  burst_phase.sample_rate = burst.params.sample_rate;
  burst_phase.phase.resize(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    burst_phase.phase[i] = std::arg(spectrum[i]);
  }
  const auto k_ll = static_cast<long long>(burst.h.size());
  for (std::size_t m = 0; m + 1 < epochs.size(); ++m) {
    const double pos =
        epochs[m] + phase_in_period * (epochs[m + 1] - epochs[m]);
    const auto q = static_cast<long long>(std::floor(pos));
    const Vec u = shifted_unit(burst_phase, pos - std::floor(pos));
    const long long start = q - k_ll / 2;
    const long long lo = std::max(0ll, -start);
    const long long hi = std::min(
        k_ll, static_cast<long long>(out.samples.size()) - start);
    for (long long i = lo; i < hi; ++i) {
      out.samples[static_cast<std::size_t>(start + i)] +=
          gain * u[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

}  // namespace velvetkit
