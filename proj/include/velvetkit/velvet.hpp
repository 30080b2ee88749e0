#pragma once

#include <cstdint>
#include <vector>

#include "velvetkit/rng.hpp"

namespace velvetkit {

// Sparse +-1 pulse train, one pulse per complete pulse-interval segment.
struct VelvetNoise {
  std::vector<double> samples;
  double pulse_interval = 0.0;  // samples
};

// Pulse m sits at round(m*t_d + r1*(t_d-1)) with sign 2*round(r2)-1,
// r1, r2 uniform on (0,1), drawn in that order per segment. A trailing
// partial segment receives no pulse.
VelvetNoise generate_ovn(std::size_t length, double t_d, std::uint64_t seed);
VelvetNoise generate_ovn(std::size_t length, double t_d, UniformSource& rng);

}  // namespace velvetkit
