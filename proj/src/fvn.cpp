#include "velvetkit/fvn.hpp"

#include <cmath>
#include <stdexcept>

#include "velvetkit/analysis.hpp"
#include "velvetkit/cosine_series.hpp"

namespace velvetkit {

namespace {
constexpr double kDurationConstant = 0.522;  // B * sigma_t for fd = B/3
}

void validate(const FvnParams& params) {
  if (!(params.sample_rate > 0))
    throw std::invalid_argument("FvnParams: sample_rate must be > 0");
  if (!(params.b_hz > 0))
    throw std::invalid_argument("FvnParams: b_hz must be > 0");
  if (!(params.fd_hz > 0 && params.fd_hz <= params.b_hz))
    throw std::invalid_argument("FvnParams: need 0 < fd_hz <= b_hz");
  if (!(params.fd_hz >= 1.0))
    throw std::invalid_argument(
        "FvnParams: fd_hz must be >= 1 Hz (placement uses fd-1)");
  if (!(params.phi_max > 0.0 && params.phi_max <= std::numbers::pi))
    throw std::invalid_argument("FvnParams: phi_max must be in (0, pi]");
  if (params.k_dft < 2 || params.k_dft % 2 != 0)
    throw std::invalid_argument("FvnParams: k_dft must be positive and even");
}

std::vector<SmootherPlacement> allocate_centers(const FvnParams& params,
                                                UniformSource& rng) {
  validate(params);
  const auto n_seg = static_cast<std::size_t>(
      std::floor(params.sample_rate / 2.0 / params.fd_hz));
  std::vector<SmootherPlacement> placements;
  placements.reserve(n_seg);
  for (std::size_t m = 0; m < n_seg; ++m) {
    const double r1 = rng.next01();
    const double r2 = rng.next01();
    const double c = std::max(
        1.0, std::floor(static_cast<double>(m) * params.fd_hz +
                        r1 * (params.fd_hz - 1.0) + 0.5));
    placements.push_back({c, (2.0 * r2 - 1.0) * params.phi_max});
  }
  return placements;
}

PhaseSpec accumulate_phase(const FvnParams& params,
                           const std::vector<SmootherPlacement>& placements) {
  validate(params);
  const std::size_t k = params.k_dft;
  const double bins_per_hz = static_cast<double>(k) / params.sample_rate;
  const double b_bins = params.b_hz * bins_per_hz;
  Vec full(k, 0.0);

  auto add_pass = [&](double center_bins, double scale) {
    const auto base =
        static_cast<long long>(std::ceil(center_bins - b_bins));
    const auto count = 2 * static_cast<long long>(b_bins) + 2;
    PhaseWindowScan scan(static_cast<double>(base) - center_bins, b_bins,
                         six_term_series());
    for (long long i = 0; i < count; ++i) {
      const double w = scan.next();
      const double d = static_cast<double>(base + i) - center_bins;
      if (std::abs(d) > b_bins) continue;
      long long idx = (base + i) % static_cast<long long>(k);
      if (idx < 0) idx += static_cast<long long>(k);
      full[static_cast<std::size_t>(idx)] += scale * w;
    }
  };

  for (const auto& p : placements) {
    const double c_bins = p.center_hz * bins_per_hz;
    add_pass(c_bins, p.scale_rad);
    add_pass(static_cast<double>(k) - c_bins, -p.scale_rad);
  }

  PhaseSpec spec;
  spec.sample_rate = params.sample_rate;
  spec.phase.assign(full.begin(), full.begin() + static_cast<long>(k / 2) + 1);
  spec.phase.front() = 0.0;
  spec.phase.back() = 0.0;
  return spec;
}

PhaseSpec design_phase(const FvnParams& params, UniformSource& rng) {
  return accumulate_phase(params, allocate_centers(params, rng));
}

Vec synthesize_from_phase(const PhaseSpec& phase) {
  CVec spectrum(phase.phase.size());
  for (std::size_t i = 0; i < phase.phase.size(); ++i) {
    spectrum[i] = std::polar(1.0, phase.phase[i]);
  }
  return irfft(spectrum, phase.k_dft());
}

FvnUnit synthesize_unit(const FvnParams& params, std::uint64_t seed) {
  SplitMix64 rng(seed);
  FvnUnit unit;
  unit.params = params;
  unit.seed = seed;
  unit.h = synthesize_from_phase(design_phase(params, rng));
  unit.sigma_t = sigma_t_circular(unit.h, params.sample_rate);
  return unit;
}

double bandwidth_for_duration(double sigma_t_s) {
  if (!(sigma_t_s > 0))
    throw std::invalid_argument("bandwidth_for_duration: sigma_t must be > 0");
  return kDurationConstant / sigma_t_s;
}

double duration_for_bandwidth(double b_hz) {
  if (!(b_hz > 0))
    throw std::invalid_argument("duration_for_bandwidth: B must be > 0");
  return kDurationConstant / b_hz;
}

void flip_polarity(PhaseSpec& phase) {
  for (std::size_t i = 1; i + 1 < phase.phase.size(); ++i) {
    phase.phase[i] += std::numbers::pi;
  }
}

}  // namespace velvetkit
