#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "velvetkit/analysis.hpp"
#include "velvetkit/excitation.hpp"
#include "velvetkit/fvn.hpp"

using namespace velvetkit;

namespace {
constexpr double kPi = std::numbers::pi;

FvnParams params_of(double b, double fd, double phi, std::size_t k,
                    double fs) {
  FvnParams p;
  p.b_hz = b;
  p.fd_hz = fd;
  p.phi_max = phi;
  p.k_dft = k;
  p.sample_rate = fs;
  return p;
}

PhaseSpec delta_phase(std::size_t k_dft, double fs) {
  PhaseSpec ph;
  ph.sample_rate = fs;
  ph.phase.assign(k_dft / 2 + 1, 0.0);
  return ph;
}

Vec crop_interior(const Vec& x, std::size_t margin) {
  return Vec(x.begin() + static_cast<std::ptrdiff_t>(margin),
             x.end() - static_cast<std::ptrdiff_t>(margin));
}
}  // namespace

TEST_CASE("constant f0 gives evenly spaced epochs") {
  F0Trajectory traj;
  traj.f_base_hz = 100.0;
  const auto epochs = extract_epochs(traj, 44100, 44100.0);
  REQUIRE(epochs.size() == 100);
  CHECK(epochs[0] == 0.0);
  for (std::size_t i = 1; i < epochs.size(); ++i) {
    CHECK(epochs[i] - epochs[i - 1] == doctest::Approx(441.0).epsilon(1e-9));
  }
}

TEST_CASE("vibrato trajectory peaks at the cent depth") {
  F0Trajectory traj;
  traj.f_base_hz = 82.41;
  traj.vibrato_rate_hz = 5.2;
  traj.vibrato_depth_cent = 10.0;
  const Vec f0 = f0_with_vibrato(traj, 44100, 44100.0);
  double peak = 0.0, trough = 1e9;
  for (double v : f0) {
    peak = std::max(peak, v);
    trough = std::min(trough, v);
  }
  const double expect = 82.41 * std::exp2(1.0 / 120.0);
  CHECK(std::abs(peak - expect) / expect < 1e-9);
  CHECK(std::abs(trough - 82.41 * std::exp2(-1.0 / 120.0)) / expect < 1e-9);

  // zero depth: exactly constant
  traj.vibrato_depth_cent = 0.0;
  for (double v : f0_with_vibrato(traj, 1000, 44100.0))
    CHECK(v == 82.41);

  // symmetric modulation: mean log-deviation vanishes over whole periods
  F0Trajectory sym;
  sym.f_base_hz = 100.0;
  sym.vibrato_rate_hz = 44100.0 / 8192.0;  // integer period in samples
  sym.vibrato_depth_cent = 25.0;
  const Vec fsym = f0_with_vibrato(sym, 8192, 44100.0);
  double acc = 0.0;
  for (double v : fsym) acc += std::log2(v / 100.0);
  CHECK(std::abs(acc) / 8192.0 < 1e-12);
}

TEST_CASE("trajectory validation") {
  F0Trajectory bad;
  bad.f_base_hz = 0.0;
  CHECK_THROWS(validate(bad));
  bad.f_base_hz = 100.0;
  bad.vibrato_depth_cent = -1.0;
  CHECK_THROWS(validate(bad));
  // epoch spacing under two samples
  F0Trajectory fast;
  fast.f_base_hz = 5000.0;
  CHECK_THROWS(extract_epochs(fast, 1000, 8000.0));
}

TEST_CASE("zero-phase units assemble into a pulse train") {
  const double fs = 44100.0;
  F0Trajectory traj;
  traj.f_base_hz = 100.0;  // exactly 441 samples per period
  const AudioBuffer y = frozen_ifvn(delta_phase(512, fs), traj, 0.5);
  REQUIRE(y.samples.size() == 22050);
  // late epochs carry ~1e-12 samples of accumulated integration dust, which
  // the fractional shift turns into a waveform deviation of that order
  for (std::size_t n = 0; n < y.samples.size(); ++n) {
    const double expect = (n % 441 == 0) ? 1.0 : 0.0;
    CHECK(std::abs(y.samples[n] - expect) < 1e-10);
  }
}

TEST_CASE("a single epoch reproduces the unit") {
  const double fs = 8000.0;
  const FvnParams p = params_of(400, 100, kPi / 2, 512, fs);
  SplitMix64 rng(17);
  const PhaseSpec ph = design_phase(p, rng);
  const Vec h = synthesize_from_phase(ph);
  F0Trajectory slow;
  slow.f_base_hz = 0.5;  // next epoch far outside the buffer
  const AudioBuffer y = frozen_ifvn(ph, slow, 0.5);
  // the right half of the circular unit lands at the start
  for (std::size_t i = 0; i < 256; ++i) {
    CHECK(std::abs(y.samples[i] - h[i]) < 1e-12);
  }
}

TEST_CASE("frozen trains are periodic, random trains are not") {
  const double fs = 44100.0;
  F0Trajectory traj;
  traj.f_base_hz = 100.0;
  const FvnParams p = params_of(200, 200.0 / 3.0, kPi / 2, 16384, fs);
  SplitMix64 rng(10);
  const PhaseSpec frozen = design_phase(p, rng);

  const AudioBuffer fy = frozen_ifvn(frozen, traj, 2.0);
  const Vec fcrop = crop_interior(fy.samples, 16384 / 2);
  CHECK(autocorrelation_at(fcrop, 441) > 0.9);

  const AudioBuffer ry = random_ifvn(p, traj, 2.0, 123);
  const Vec rcrop = crop_interior(ry.samples, 16384 / 2);
  CHECK(std::abs(autocorrelation_at(rcrop, 441)) < 0.2);
}

TEST_CASE("morph endpoints are bit-exact") {
  const FvnParams p = params_of(100, 20, kPi / 2, 2048, 8000.0);
  SplitMix64 ra(1), rb(2);
  const PhaseSpec a = design_phase(p, ra);
  const PhaseSpec b = design_phase(p, rb);
  const PhaseSpec at_zero = morph_unit(a, b, 0.0);
  const PhaseSpec at_one = morph_unit(a, b, 1.0);
  for (std::size_t i = 0; i < a.phase.size(); ++i) {
    CHECK(at_zero.phase[i] == a.phase[i]);
    CHECK(at_one.phase[i] == b.phase[i]);
  }
  const PhaseSpec mid = morph_unit(a, b, 0.5);
  for (std::size_t i = 0; i < a.phase.size(); ++i) {
    CHECK(mid.phase[i] ==
          doctest::Approx(0.5 * (a.phase[i] + b.phase[i])).epsilon(1e-12));
  }
  PhaseSpec short_phase = a;
  short_phase.phase.resize(100);
  CHECK_THROWS(morph_unit(a, short_phase, 0.5));
  CHECK_THROWS(morph_unit(a, b, 1.5));
}

TEST_CASE("morphed trains reproduce the endpoints") {
  const double fs = 8000.0;
  const FvnParams p = params_of(100, 20, kPi / 2, 2048, fs);
  SplitMix64 rng(5);
  const PhaseSpec frozen = design_phase(p, rng);
  F0Trajectory traj;
  traj.f_base_hz = 100.0;

  const AudioBuffer at_zero = morph_ifvn(frozen, p, traj, 0.4, 99,
                                         [](double) { return 0.0; });
  const AudioBuffer pure_frozen = frozen_ifvn(frozen, traj, 0.4);
  REQUIRE(at_zero.samples.size() == pure_frozen.samples.size());
  for (std::size_t i = 0; i < at_zero.samples.size(); ++i) {
    CHECK(at_zero.samples[i] == pure_frozen.samples[i]);
  }

  const AudioBuffer at_one = morph_ifvn(frozen, p, traj, 0.4, 99,
                                        [](double) { return 1.0; });
  const AudioBuffer pure_random = random_ifvn(p, traj, 0.4, 99);
  REQUIRE(at_one.samples.size() == pure_random.samples.size());
  for (std::size_t i = 0; i < at_one.samples.size(); ++i) {
    CHECK(at_one.samples[i] == pure_random.samples[i]);
  }
}

TEST_CASE("calibration curve decreases and inverts consistently") {
  const double fs = 8000.0;
  const FvnParams p = params_of(100, 20, kPi / 2, 4096, fs);
  SplitMix64 rng(42);
  const PhaseSpec frozen = design_phase(p, rng);
  F0Trajectory traj;
  traj.f_base_hz = 100.0;
  const std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                    0.6, 0.7, 0.8, 0.9, 1.0};
  const PrCalibration cal =
      calibrate_pr_ratio(p, traj, frozen, grid, 50, 0.3, 7);
  REQUIRE(cal.g_db.size() == grid.size());
  for (std::size_t i = 1; i < cal.g_db.size(); ++i) {
    CHECK(cal.g_db[i] < cal.g_db[i - 1]);
  }
  // r = 0 collapses the residual entirely
  CHECK(cal.g_db.front() >= 79.0);
  // table nodes invert exactly; interior targets land between their nodes
  CHECK(invert_pr(cal, cal.g_db[3]) == doctest::Approx(grid[3]));
  const double eta = 0.5 * (cal.g_db[4] + cal.g_db[5]);
  const double r = invert_pr(cal, eta);
  CHECK(r > grid[4]);
  CHECK(r < grid[5]);
  // off-scale requests clamp
  CHECK(invert_pr(cal, 200.0) == 0.0);
  CHECK(invert_pr(cal, -200.0) == 1.0);

  CHECK_THROWS(calibrate_pr_ratio(p, traj, frozen, grid, 10, 0.3, 7));
  CHECK_THROWS(
      calibrate_pr_ratio(p, traj, frozen, {0.0, 0.5}, 50, 0.3, 7));
}

TEST_CASE("burst placement is phase-invariant in energy") {
  const double fs = 44100.0;
  const FvnParams p = params_of(2000, 400, kPi / 2, 1024, fs);
  const FvnUnit burst = synthesize_unit(p, 3);
  F0Trajectory traj;
  traj.f_base_hz = 100.0;
  AudioBuffer carrier;
  carrier.sample_rate = fs;
  carrier.samples.assign(44100, 0.0);

  const AudioBuffer none = place_bursts(carrier, traj, burst, 0.3, 0.0);
  for (std::size_t i = 0; i < none.samples.size(); ++i) {
    CHECK(none.samples[i] == 0.0);
  }

  // fractional placements at two different phases inject the same energy up
  // to the Nyquist-bin attenuation (at most 1/K per burst): a window cut on
  // period boundaries holds the same number of bursts for any intra-period
  // phase, and burst tails at the cuts are ~-110 dB
  const AudioBuffer a = place_bursts(carrier, traj, burst, 0.25, 0.7);
  const AudioBuffer b = place_bursts(carrier, traj, burst, 0.66, 0.7);
  const std::size_t lo = 441 * 12, hi = 441 * 88;
  double ea = 0.0, eb = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    ea += a.samples[i] * a.samples[i];
    eb += b.samples[i] * b.samples[i];
  }
  CHECK(std::abs(ea - eb) / ea < 2.0 / 1024.0);
  // one unit-energy burst per period at gain 0.7
  CHECK(ea == doctest::Approx(0.49 * 76.0).epsilon(0.01));

  CHECK_THROWS(place_bursts(carrier, traj, burst, 1.0, 0.5));
}

TEST_CASE("short bursts keep sub-millisecond durations") {
  // the construction pins sigma_t ~ 0.19*phi_max*sqrt(B/F_d)/B, about
  // a third of a millisecond here
  const FvnParams p = params_of(2000, 400, kPi / 2, 4096, 44100.0);
  Vec sigmas;
  for (int s = 0; s < 50; ++s) {
    sigmas.push_back(
        synthesize_unit(p, 1000 + static_cast<std::uint64_t>(s)).sigma_t);
  }
  std::sort(sigmas.begin(), sigmas.end());
  const double median = sigmas[sigmas.size() / 2];
  CHECK(median > 0.25e-3);
  CHECK(median < 0.45e-3);
}
