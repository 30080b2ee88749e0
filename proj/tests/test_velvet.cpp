#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "velvetkit/analysis.hpp"
#include "velvetkit/rng.hpp"
#include "velvetkit/velvet.hpp"

using namespace velvetkit;

namespace {
struct FixedPair final : UniformSource {
  double r1, r2;
  bool first = true;
  FixedPair(double a, double b) : r1(a), r2(b) {}
  double next01() override {
    first = !first;
    return first ? r2 : r1;  // r1 on odd calls, r2 on even
  }
};
}  // namespace

TEST_CASE("one pulse per complete segment") {
  const VelvetNoise v = generate_ovn(100, 5.0, 42);
  REQUIRE(v.samples.size() == 100);
  int pulses = 0;
  for (std::size_t m = 0; m < 20; ++m) {
    int in_segment = 0;
    for (std::size_t i = 5 * m; i < 5 * (m + 1); ++i) {
      if (v.samples[i] != 0.0) {
        ++in_segment;
        CHECK((v.samples[i] == 1.0 || v.samples[i] == -1.0));
      }
    }
    CHECK(in_segment == 1);
    pulses += in_segment;
  }
  CHECK(pulses == 20);
}

TEST_CASE("trailing partial segment stays empty") {
  const VelvetNoise v = generate_ovn(103, 5.0, 42);
  int pulses = 0;
  for (double s : v.samples) pulses += (s != 0.0);
  CHECK(pulses == 20);
  for (std::size_t i = 100; i < 103; ++i) CHECK(v.samples[i] == 0.0);
}

TEST_CASE("injected draws pin pulse positions and signs") {
  // r1=0.5 puts pulse m at round(5m + 0.5*4) = 5m+2; r2=0.9 makes it +1.
  FixedPair rng(0.5, 0.9);
  const VelvetNoise v = generate_ovn(100, 5.0, rng);
  for (std::size_t m = 0; m < 20; ++m) {
    for (std::size_t i = 5 * m; i < 5 * (m + 1); ++i) {
      CHECK(v.samples[i] == (i == 5 * m + 2 ? 1.0 : 0.0));
    }
  }
  // r2 below one half gives negative pulses
  FixedPair neg(0.5, 0.1);
  const VelvetNoise w = generate_ovn(100, 5.0, neg);
  for (std::size_t m = 0; m < 20; ++m) CHECK(w.samples[5 * m + 2] == -1.0);
}

TEST_CASE("parameter errors") {
  CHECK_THROWS(generate_ovn(100, 0.5, 1));
  CHECK_THROWS(generate_ovn(3, 5.0, 1));
}

TEST_CASE("determinism per seed") {
  const VelvetNoise a = generate_ovn(10000, 7.0, 123);
  const VelvetNoise b = generate_ovn(10000, 7.0, 123);
  const VelvetNoise c = generate_ovn(10000, 7.0, 124);
  CHECK(std::memcmp(a.samples.data(), b.samples.data(),
                    a.samples.size() * sizeof(double)) == 0);
  bool differs = false;
  for (std::size_t i = 0; i < c.samples.size(); ++i)
    differs |= (a.samples[i] != c.samples[i]);
  CHECK(differs);
}

TEST_CASE("sign balance over 1e5 pulses") {
  const std::size_t t_d = 10, n_pulses = 100000;
  const VelvetNoise v = generate_ovn(t_d * n_pulses, t_d, 2024);
  double mean = 0.0;
  for (double s : v.samples) mean += s;
  mean /= static_cast<double>(n_pulses);
  CHECK(std::abs(mean) <= 0.02);
}

TEST_CASE("within-segment offsets match the rounding distribution") {
  // offset = round(r1*(T_d-1)) over r1 in (0,1): the end offsets 0 and
  // T_d-1 each get half a cell of probability, interior offsets a full
  // cell.
  const std::size_t t_d = 5, n_pulses = 100000;
  const VelvetNoise v = generate_ovn(t_d * n_pulses, t_d, 77);
  std::vector<std::size_t> count(t_d, 0);
  for (std::size_t m = 0; m < n_pulses; ++m) {
    for (std::size_t o = 0; o < t_d; ++o) {
      if (v.samples[t_d * m + o] != 0.0) ++count[o];
    }
  }
  const double n = static_cast<double>(n_pulses);
  const std::vector<double> expect = {n / 8, n / 4, n / 4, n / 4, n / 8};
  double chi2 = 0.0;
  for (std::size_t o = 0; o < t_d; ++o) {
    const double d = static_cast<double>(count[o]) - expect[o];
    chi2 += d * d / expect[o];
  }
  CHECK(chi2 < 13.277);  // chi-square 4 dof, p > 0.01
}

TEST_CASE("dense velvet has a flat average spectrum") {
  // Above ~3000 pulses/s the averaged periodogram is white within +-1 dB.
  const std::size_t len = 44100, seg = 2048;
  Vec mean_psd(seg / 2 + 1, 0.0);
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    const VelvetNoise v =
        generate_ovn(len, 14.0, 5000 + static_cast<std::uint64_t>(rep));
    const Vec psd = welch_psd(v.samples, seg, false);
    for (std::size_t i = 0; i < psd.size(); ++i) mean_psd[i] += psd[i];
  }
  double level = 0.0;
  for (std::size_t i = 1; i + 1 < mean_psd.size(); ++i) level += mean_psd[i];
  level /= static_cast<double>(mean_psd.size() - 2);
  double worst_db = 0.0;
  for (std::size_t i = 1; i + 1 < mean_psd.size(); ++i) {
    worst_db =
        std::max(worst_db, std::abs(10.0 * std::log10(mean_psd[i] / level)));
  }
  CHECK(worst_db < 1.0);
}
