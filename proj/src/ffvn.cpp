#include "velvetkit/ffvn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "velvetkit/analysis.hpp"

namespace velvetkit {

namespace {
constexpr double kPi = std::numbers::pi;

// CDF of the unit-area raised cosine on [-w/2, w/2].
double smoother_cdf(double t, double w) {
  if (w <= 0) return t < 0 ? 0.0 : 1.0;
  if (t <= -w / 2) return 0.0;
  if (t >= w / 2) return 1.0;
  return t / w + 0.5 + std::sin(2.0 * kPi * t / w) / (2.0 * kPi);
}
}  // namespace

void validate(const DurationProfile& profile) {
  if (const auto* s = std::get_if<SigmoidProfile>(&profile)) {
    if (!(s->b_min_s > 0 && s->b_min_s <= s->b_max_s))
      throw std::invalid_argument("SigmoidProfile: need 0 < b_min <= b_max");
    if (!(s->f_tr_hz > 0))
      throw std::invalid_argument("SigmoidProfile: f_tr must be > 0");
    return;
  }
  const auto& b = std::get<BandProfile>(profile);
  if (b.boundaries_hz.size() != b.durations_s.size() + 1)
    throw std::invalid_argument("BandProfile: need one more boundary than bands");
  if (b.boundaries_hz.front() != 0.0)
    throw std::invalid_argument("BandProfile: first boundary must be 0");
  for (std::size_t i = 1; i < b.boundaries_hz.size(); ++i) {
    if (!(b.boundaries_hz[i] > b.boundaries_hz[i - 1]))
      throw std::invalid_argument("BandProfile: boundaries must increase");
  }
  for (double d : b.durations_s) {
    if (!(d > 0))
      throw std::invalid_argument("BandProfile: durations must be > 0");
  }
  if (b.smoother_width_hz < 0)
    throw std::invalid_argument("BandProfile: smoother width must be >= 0");
}

double evaluate_profile(const DurationProfile& profile, double f_hz) {
  if (f_hz < 0) throw std::invalid_argument("evaluate_profile: f < 0");
  if (const auto* s = std::get_if<SigmoidProfile>(&profile)) {
    const double c = s->b_min_s / s->b_max_s;
    return ((1.0 - c) / (1.0 + std::exp(-(f_hz - s->f_c_hz) / s->f_tr_hz)) +
            c) *
           s->b_max_s;
  }
  const auto& b = std::get<BandProfile>(profile);
  if (f_hz > b.boundaries_hz.back() + 1e-9)
    throw std::invalid_argument("evaluate_profile: f beyond last boundary");
  // Telescoping over interior boundaries: edge bands extend outward, which
  // matches edge-replicated discrete smoothing and keeps constants exact.
  double v = b.durations_s.front();
  for (std::size_t i = 1; i < b.durations_s.size(); ++i) {
    v += (b.durations_s[i] - b.durations_s[i - 1]) *
         smoother_cdf(f_hz - b.boundaries_hz[i], b.smoother_width_hz);
  }
  return v;
}

double max_duration(const DurationProfile& profile) {
  if (const auto* s = std::get_if<SigmoidProfile>(&profile)) return s->b_max_s;
  const auto& b = std::get<BandProfile>(profile);
  return *std::max_element(b.durations_s.begin(), b.durations_s.end());
}

WarpMap build_warp_map(const DurationProfile& profile, double sample_rate,
                       std::size_t k_dft) {
  validate(profile);
  if (!(sample_rate > 0) || k_dft < 2 || k_dft % 2 != 0)
    throw std::invalid_argument("build_warp_map: bad grid parameters");
  if (const auto* b = std::get_if<BandProfile>(&profile)) {
    if (std::abs(b->boundaries_hz.back() - sample_rate / 2) >
        1e-6 * sample_rate)
      throw std::invalid_argument(
          "build_warp_map: last band boundary must be fs/2");
  }
  const std::size_t half = k_dft / 2;
  const double df = sample_rate / static_cast<double>(k_dft);
  const double b_max = max_duration(profile);

  Vec g(half + 1);
  for (std::size_t i = 0; i <= half; ++i) {
    g[i] = evaluate_profile(profile, static_cast<double>(i) * df) / b_max;
  }
  WarpMap map;
  map.nu_bins.resize(half + 1);
  map.nu_bins[0] = 0.0;
  double acc = 0.0;
  for (std::size_t i = 1; i <= half; ++i) {
    acc += (g[i] + g[i - 1]) / 2.0;
    map.nu_bins[i] = acc;
  }
  if (!(acc > 0))
    throw std::invalid_argument("build_warp_map: degenerate profile");
  map.alpha = static_cast<double>(half) / acc;
  for (double& v : map.nu_bins) v *= map.alpha;
  map.nu_bins.back() = static_cast<double>(half);  // pin the endpoint exactly
  return map;
}

PhaseSpec design_ffvn_phase(const DurationProfile& profile,
                            const FvnParams& params, UniformSource& rng) {
  const double b_max = max_duration(profile);
  if (static_cast<double>(params.k_dft) <
      5.0 * b_max * params.sample_rate)
    throw std::invalid_argument(
        "design_ffvn_phase: buffer must be at least five times the maximum "
        "target duration");
  const WarpMap map = build_warp_map(profile, params.sample_rate, params.k_dft);

  // On the warped axis a constant-duration design at b_max/alpha lands every
  // band on its target after the alpha*g(f) stretch back to the f axis.
  const double sigma_worg = b_max / map.alpha;
  FvnParams warped = params;
  warped.b_hz = bandwidth_for_duration(sigma_worg);
  warped.fd_hz = warped.b_hz * (params.fd_hz / params.b_hz);
  const PhaseSpec on_nu = design_phase(warped, rng);

  PhaseSpec out;
  out.sample_rate = params.sample_rate;
  out.phase.resize(map.nu_bins.size());
  const std::size_t half = map.nu_bins.size() - 1;
  for (std::size_t i = 0; i <= half; ++i) {
    const double u = map.nu_bins[i];
    auto i0 = static_cast<std::size_t>(u);
    if (i0 >= half) i0 = half - 1;
    const double t = u - static_cast<double>(i0);
    out.phase[i] = on_nu.phase[i0] * (1.0 - t) + on_nu.phase[i0 + 1] * t;
  }
  out.phase.front() = 0.0;
  out.phase.back() = 0.0;
  return out;
}

FvnUnit synthesize_ffvn_unit(const DurationProfile& profile,
                             const FvnParams& params, std::uint64_t seed) {
  SplitMix64 rng(seed);
  FvnUnit unit;
  unit.params = params;
  unit.seed = seed;
  unit.h = synthesize_from_phase(design_ffvn_phase(profile, params, rng));
  unit.sigma_t = sigma_t_circular(unit.h, params.sample_rate);
  return unit;
}

}  // namespace velvetkit
