#pragma once

#include <cstddef>
#include <vector>

namespace velvetkit {

struct AudioBuffer {
  std::vector<double> samples;
  double sample_rate = 44100.0;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

}  // namespace velvetkit
