#pragma once

#include <cstdint>

namespace velvetkit {

// Uniform (0,1) draw source. Virtual so tests can inject fixed streams.
struct UniformSource {
  virtual double next01() = 0;
  virtual ~UniformSource() = default;
};

// SplitMix64 (Steele/Lea/Flood). Chosen for trivial cross-language replay:
// one 64-bit state word, no warmup.
class SplitMix64 final : public UniformSource {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Strictly inside (0,1): top 53 bits, offset by half an ulp.
  double next01() override {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Stable per-index substream seed (epochs, trials). The multiplier keeps
// consecutive indices far apart in SplitMix64's state space.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 g(master ^ (0xd1b54a32d192ed03ull * (index + 1)));
  return g.next_u64();
}

}  // namespace velvetkit
