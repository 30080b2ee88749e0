#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "velvetkit/config.hpp"
#include "velvetkit/ffvn.hpp"
#include "velvetkit/wav_io.hpp"

using namespace velvetkit;

namespace {

std::vector<char> read_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(bool(f));
  return std::vector<char>((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
}

void write_bytes(const std::string& path, const std::vector<char>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  REQUIRE(bool(f));
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Expects fn() to throw std::runtime_error whose message contains `needle`.
template <typename Fn>
void check_throws_containing(Fn&& fn, const std::string& needle) {
  try {
    fn();
    FAIL_CHECK("no exception; expected message containing '" << needle << "'");
  } catch (const std::runtime_error& e) {
    INFO("message: " << e.what());
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

AudioBuffer make_buffer(std::vector<double> samples, double fs = 44100.0) {
  AudioBuffer b;
  b.samples = std::move(samples);
  b.sample_rate = fs;
  return b;
}

}  // namespace

TEST_CASE("float32 files round-trip to the stored precision") {
  const std::string path = "io_float.wav";
  const AudioBuffer src =
      make_buffer({0.0, 1.0, -1.0, 0.5, -0.25, 0.1234567, 3e-20, -0.9999},
                  48000.0);
  write_wav(path, src, WavFormat::kFloat32);
  const AudioBuffer back = read_wav(path);

  CHECK(back.sample_rate == 48000.0);
  REQUIRE(back.samples.size() == src.samples.size());
  for (std::size_t i = 0; i < src.samples.size(); ++i)
    CHECK(back.samples[i] ==
          static_cast<double>(static_cast<float>(src.samples[i])));
}

TEST_CASE("16-bit files hold exact integer levels and clip at full scale") {
  const std::string path = "io_pcm16.wav";
  const std::vector<int> levels = {-32768, -12345, -1, 0, 1, 300, 32767};
  std::vector<double> samples;
  for (int q : levels) samples.push_back(q / 32768.0);
  samples.push_back(1.5);   // clips high
  samples.push_back(-1.5);  // clips low
  write_wav(path, make_buffer(samples), WavFormat::kPcm16);
  const AudioBuffer back = read_wav(path);

  REQUIRE(back.samples.size() == samples.size());
  for (std::size_t i = 0; i < levels.size(); ++i)
    CHECK(back.samples[i] == levels[i] / 32768.0);
  CHECK(back.samples[levels.size()] == 32767 / 32768.0);
  CHECK(back.samples[levels.size() + 1] == -1.0);

  // arbitrary levels quantize within half a step
  std::vector<double> tone(1000);
  for (std::size_t i = 0; i < tone.size(); ++i)
    tone[i] = 0.9 * std::sin(0.142 * static_cast<double>(i));
  write_wav(path, make_buffer(tone), WavFormat::kPcm16);
  const AudioBuffer qback = read_wav(path);
  for (std::size_t i = 0; i < tone.size(); ++i)
    CHECK(std::abs(qback.samples[i] - tone[i]) <= 0.500001 / 32768.0);
}

TEST_CASE("24-bit files quantize to 2^-23") {
  const std::string path = "io_pcm24.wav";
  const std::vector<int> levels = {-8388608, -65536, -1, 0, 1, 99, 8388607};
  std::vector<double> samples;
  for (int q : levels) samples.push_back(q / 8388608.0);
  write_wav(path, make_buffer(samples), WavFormat::kPcm24);
  const AudioBuffer back = read_wav(path);

  REQUIRE(back.samples.size() == samples.size());
  for (std::size_t i = 0; i < levels.size(); ++i)
    CHECK(back.samples[i] == levels[i] / 8388608.0);

  std::vector<double> tone(500);
  for (std::size_t i = 0; i < tone.size(); ++i)
    tone[i] = 0.8 * std::cos(0.073 * static_cast<double>(i));
  write_wav(path, make_buffer(tone), WavFormat::kPcm24);
  const AudioBuffer qback = read_wav(path);
  for (std::size_t i = 0; i < tone.size(); ++i)
    CHECK(std::abs(qback.samples[i] - tone[i]) <= 0.500001 / 8388608.0);
}

TEST_CASE("write_wav rejects empty buffers and fractional rates") {
  CHECK_THROWS_AS(write_wav("io_bad.wav", make_buffer({})),
                  std::invalid_argument);
  CHECK_THROWS_AS(write_wav("io_bad.wav", make_buffer({0.1}, 44100.5)),
                  std::invalid_argument);
}

TEST_CASE("malformed files are rejected with the offending byte offset") {
  const std::string path = "io_malformed.wav";

  write_bytes(path, {'h', 'e', 'l', 'l', 'o', ' ', 'w', 'o', 'r', 'l', 'd',
                     '!', '!', '!'});
  check_throws_containing([&] { read_wav(path); },
                          "missing RIFF tag at byte 0");

  write_bytes(path, {'R', 'I', 'F', 'F', 'x'});
  check_throws_containing([&] { read_wav(path); },
                          "truncated RIFF header at byte 5");

  // valid float file: fmt body at 20, fact at 38, data size field at 54
  write_wav(path, make_buffer({0.1, 0.2, 0.3, 0.4}), WavFormat::kFloat32);
  std::vector<char> good = read_bytes(path);

  std::vector<char> overrun = good;
  overrun[54] = static_cast<char>(0xff);
  overrun[55] = static_cast<char>(0xff);
  write_bytes(path, overrun);
  check_throws_containing([&] { read_wav(path); },
                          "chunk overruns file at byte 54");

  std::vector<char> stereo = good;
  stereo[22] = 2;
  write_bytes(path, stereo);
  check_throws_containing([&] { read_wav(path); }, "only mono");

  std::vector<char> odd_bits = good;
  odd_bits[34] = 8;  // float code with 8 bits: no such format
  write_bytes(path, odd_bits);
  check_throws_containing([&] { read_wav(path); }, "unsupported sample format");

  // PCM16 layout: data chunk header at 36, size field at 40
  write_wav(path, make_buffer({0.1, 0.2, 0.3, 0.4}), WavFormat::kPcm16);
  std::vector<char> ragged = read_bytes(path);
  ragged[40] = 7;
  write_bytes(path, ragged);
  check_throws_containing([&] { read_wav(path); }, "ragged data chunk");

  CHECK_THROWS_AS(read_wav("io_no_such_file.wav"), std::runtime_error);
}

TEST_CASE("key-value files preserve order and survive a round trip") {
  KeyValueFile kv;
  kv.set("zeta", "last words");
  kv.set_double("pi_ish", 3.141592653589793);
  kv.set_u64("count", 18446744073709551615ull);
  kv.set("zeta", "rewritten");  // in-place, keeps its slot

  REQUIRE(kv.entries().size() == 3);
  CHECK(kv.entries()[0].first == "zeta");
  CHECK(kv.require("zeta") == "rewritten");
  CHECK(kv.require_double("pi_ish") == 3.141592653589793);
  CHECK(kv.require_u64("count") == 18446744073709551615ull);
  CHECK_FALSE(kv.get("absent").has_value());

  const KeyValueFile reparsed = KeyValueFile::parse(kv.serialize(), "mem");
  CHECK(reparsed.serialize() == kv.serialize());

  const std::string path = "io_config.txt";
  kv.save(path);
  CHECK(KeyValueFile::load(path).serialize() == kv.serialize());
}

TEST_CASE("key-value parsing: comments, spacing, and error positions") {
  const KeyValueFile kv = KeyValueFile::parse(
      "# leading comment\n"
      "\n"
      "a=1\n"
      "  b   =   two words  # trailing comment\n",
      "cfg");
  CHECK(kv.require("a") == "1");
  CHECK(kv.require("b") == "two words");

  check_throws_containing(
      [] { KeyValueFile::parse("a = 1\n\nnonsense line\n", "cfg"); }, "cfg:3");
  check_throws_containing([] { KeyValueFile::parse("= value\n", "cfg"); },
                          "empty key");
  check_throws_containing([&] { kv.require("missing"); },
                          "missing key 'missing'");
  check_throws_containing(
      [] {
        KeyValueFile::parse("x = 1.5 extra\n", "cfg").require_double("x");
      },
      "trailing junk");

  KeyValueFile bad;
  bad.set("n", "12x");
  check_throws_containing([&] { bad.require_u64("n"); },
                          "not an unsigned integer");
  bad.set("n", "-3");
  CHECK_THROWS_AS(bad.require_u64("n"), std::runtime_error);
  bad.set("n", "3.5");
  CHECK_THROWS_AS(bad.require_u64("n"), std::runtime_error);
}

TEST_CASE("unit sidecars persist the full recipe") {
  const std::string path = "io_sidecar.txt";
  UnitSidecar s;
  s.params.b_hz = 267.36;
  s.params.fd_hz = 53.472;
  s.params.phi_max = 3.141592653589793;
  s.params.k_dft = 16384;
  s.params.sample_rate = 44100.0;
  s.seed = 777;
  s.sigma_t_s = 5.0013e-3;
  s.family = "ffvn";
  s.center_index = 8192;
  s.key_id = "vault-3";
  save_unit_sidecar(path, s);

  const UnitSidecar back = load_unit_sidecar(path);
  CHECK(back.params.b_hz == s.params.b_hz);
  CHECK(back.params.fd_hz == s.params.fd_hz);
  CHECK(back.params.phi_max == s.params.phi_max);
  CHECK(back.params.k_dft == s.params.k_dft);
  CHECK(back.params.sample_rate == s.params.sample_rate);
  CHECK(back.seed == s.seed);
  CHECK(back.sigma_t_s == s.sigma_t_s);
  CHECK(back.family == "ffvn");
  CHECK(back.center_index == 8192);
  CHECK(back.key_id == "vault-3");

  // key_id is optional and family defaults to fvn
  KeyValueFile kv = KeyValueFile::load(path);
  CHECK_FALSE(kv.get("key_id")->empty());
  KeyValueFile minimal;
  for (const auto& [k, v] : kv.entries())
    if (k != "key_id" && k != "family") minimal.set(k, v);
  minimal.save(path);
  const UnitSidecar bare = load_unit_sidecar(path);
  CHECK(bare.key_id.empty());
  CHECK(bare.family == "fvn");

  // wrong type tag and invalid recipes are rejected
  kv.set("type", "something_else");
  kv.save(path);
  check_throws_containing([&] { load_unit_sidecar(path); },
                          "not a unit sidecar");
  s.params.fd_hz = 2.0 * s.params.b_hz;  // spacing beyond the bandwidth
  save_unit_sidecar(path, s);
  CHECK_THROWS(load_unit_sidecar(path));
}

TEST_CASE("sigmoid profile text parses with millisecond durations") {
  const DurationProfile profile = parse_duration_profile(
      "# rises through 2 kHz\n"
      "form = sigmoid\n"
      "f_c_hz = 2000\n"
      "f_tr_hz = 200\n"
      "b_max_ms = 3\n"
      "b_min_ms = 0.0037\n");
  REQUIRE(std::holds_alternative<SigmoidProfile>(profile));
  const auto& p = std::get<SigmoidProfile>(profile);
  CHECK(p.f_c_hz == 2000.0);
  CHECK(p.f_tr_hz == 200.0);
  CHECK(p.b_max_s == doctest::Approx(3e-3).epsilon(1e-15));
  CHECK(p.b_min_s == doctest::Approx(3.7e-6).epsilon(1e-15));
  // midpoint value: halfway between floor and ceiling
  const double c = p.b_min_s / p.b_max_s;
  CHECK(evaluate_profile(profile, 2000.0) ==
        doctest::Approx((1.0 + c) / 2.0 * p.b_max_s).epsilon(1e-12));
}

TEST_CASE("band profile text parses contiguous rows") {
  const DurationProfile profile = parse_duration_profile(
      "form = band\n"
      "smoother_width_hz = 400\n"
      "band 0 1000 0.1\n"
      "band 1000 2000 0.4\n"
      "band 2000 4000 3\n");
  REQUIRE(std::holds_alternative<BandProfile>(profile));
  const auto& p = std::get<BandProfile>(profile);
  CHECK(p.smoother_width_hz == 400.0);
  REQUIRE(p.boundaries_hz ==
          std::vector<double>{0.0, 1000.0, 2000.0, 4000.0});
  CHECK(p.durations_s[0] == doctest::Approx(1e-4).epsilon(1e-15));
  CHECK(p.durations_s[2] == doctest::Approx(3e-3).epsilon(1e-15));
}

TEST_CASE("profile text errors name the offending line") {
  check_throws_containing(
      [] {
        parse_duration_profile(
            "form = band\nsmoother_width_hz = 100\n"
            "band 0 1000 1\nband 1500 2000 1\n",
            "prof");
      },
      "prof:4: bands must be contiguous");
  check_throws_containing(
      [] { parse_duration_profile("form = band\nsmoother_width_hz = 1\n"); },
      "band profile without band rows");
  check_throws_containing(
      [] {
        parse_duration_profile(
            "form = sigmoid\nf_c_hz = 1\nf_tr_hz = 1\n"
            "b_max_ms = 1\nb_min_ms = 0.1\nband 0 100 1\n");
      },
      "band rows in a sigmoid profile");
  check_throws_containing(
      [] { parse_duration_profile("form = quadratic\n"); }, "unknown form");
  check_throws_containing(
      [] {
        parse_duration_profile(
            "form = band\nsmoother_width_hz = 1\nband 0 100 1 junk\n");
      },
      "trailing junk");
  check_throws_containing(
      [] { parse_duration_profile("band 0 100 1\n", "prof"); },
      "missing key 'form'");
}

TEST_CASE("breakpoint curves parse, clamp, and interpolate") {
  const auto points = parse_breakpoints(
      "# ramp\n"
      "0.0 1.0\n"
      "2.0 5.0\n"
      "4.0 5.0\n");
  REQUIRE(points.size() == 3);
  CHECK(eval_breakpoints(points, -1.0) == 1.0);   // clamp below
  CHECK(eval_breakpoints(points, 99.0) == 5.0);   // clamp above
  CHECK(eval_breakpoints(points, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(eval_breakpoints(points, 3.0) == 5.0);

  check_throws_containing(
      [] { parse_breakpoints("0 1\n-1 2\n", "bp"); },
      "bp:2: times must be non-decreasing");
  check_throws_containing([] { parse_breakpoints("0 1 junk\n", "bp"); },
                          "trailing junk");
  check_throws_containing([] { parse_breakpoints("", "bp"); },
                          "no breakpoints");
  CHECK_THROWS_AS(
      eval_breakpoints(std::vector<std::pair<double, double>>{}, 0.0),
      std::invalid_argument);
}
