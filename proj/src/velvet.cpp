#include "velvetkit/velvet.hpp"

#include <cmath>
#include <stdexcept>

namespace velvetkit {

VelvetNoise generate_ovn(std::size_t length, double t_d, UniformSource& rng) {
  if (!(t_d >= 1.0))
    throw std::invalid_argument("generate_ovn: pulse interval must be >= 1");
  if (static_cast<double>(length) < t_d)
    throw std::invalid_argument("generate_ovn: length shorter than one segment");
  VelvetNoise out;
  out.pulse_interval = t_d;
  out.samples.assign(length, 0.0);
  const auto n_seg =
      static_cast<std::size_t>(std::floor(static_cast<double>(length) / t_d));
  for (std::size_t m = 0; m < n_seg; ++m) {
    const double r1 = rng.next01();
    const double r2 = rng.next01();
    // std::round is round-half-away-from-zero, as required for determinism.
    const double pos =
        std::round(static_cast<double>(m) * t_d + r1 * (t_d - 1.0));
    const auto idx = static_cast<std::size_t>(pos);
    if (idx >= length) continue;  // unreachable for r1 in (0,1); keep safe
    out.samples[idx] = 2.0 * std::round(r2) - 1.0;
  }
  return out;
}

VelvetNoise generate_ovn(std::size_t length, double t_d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return generate_ovn(length, t_d, rng);
}

}  // namespace velvetkit
