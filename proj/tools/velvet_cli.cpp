// velvet: generate, filter, and measure velvet-noise-family signals.
//
// Exit codes: 0 success, 2 usage error, 3 data/parameter error.
// Every randomized subcommand takes an explicit --seed; every run that
// writes a file also writes `<out>.prov.txt` echoing the full configuration,
// so outputs are reproducible byte-for-byte from the record.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <locale>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "velvetkit/analysis.hpp"
#include "velvetkit/config.hpp"
#include "velvetkit/dft.hpp"
#include "velvetkit/excitation.hpp"
#include "velvetkit/ffvn.hpp"
#include "velvetkit/fvn.hpp"
#include "velvetkit/hiding.hpp"
#include "velvetkit/velvet.hpp"
#include "velvetkit/version.hpp"
#include "velvetkit/wav_io.hpp"

namespace vk = velvetkit;

namespace {

constexpr double kPi = std::numbers::pi;

void write_provenance(const std::string& out_path, vk::KeyValueFile kv) {
  vk::KeyValueFile full;
  full.set("version", vk::kVersion);
  for (const auto& e : kv.entries()) full.set(e.first, e.second);
  full.save(out_path + ".prov.txt");
}

// Unit responses are stored causally (peak at K/2); the sidecar records the
// rotation so the circular-centered form can be restored exactly.
vk::Vec rotate_for_file(const vk::Vec& h_circular, std::size_t center) {
  const std::size_t k = h_circular.size();
  vk::Vec out(k);
  for (std::size_t i = 0; i < k; ++i)
    out[i] = h_circular[(i + k - center) % k];
  return out;
}

vk::Vec rotate_from_file(const vk::Vec& h_file, std::size_t center) {
  const std::size_t k = h_file.size();
  vk::Vec out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = h_file[(i + center) % k];
  return out;
}

struct LoadedUnit {
  vk::FvnUnit unit;
  vk::UnitSidecar sidecar;
};

LoadedUnit load_unit(const std::string& wav_path) {
  const vk::AudioBuffer buf = vk::read_wav(wav_path);
  const vk::UnitSidecar sidecar = vk::load_unit_sidecar(wav_path + ".txt");
  if (buf.samples.size() != sidecar.params.k_dft)
    throw std::runtime_error(wav_path + ": length disagrees with sidecar");
  vk::FvnUnit unit;
  unit.h = rotate_from_file(buf.samples, sidecar.center_index);
  unit.params = sidecar.params;
  unit.seed = sidecar.seed;
  unit.sigma_t = sidecar.sigma_t_s;
  return {std::move(unit), sidecar};
}

void save_unit(const std::string& wav_path, const vk::FvnUnit& unit,
               const std::string& family, const std::string& key_id) {
  vk::UnitSidecar sidecar;
  sidecar.params = unit.params;
  sidecar.seed = unit.seed;
  sidecar.sigma_t_s = unit.sigma_t;
  sidecar.family = family;
  sidecar.center_index = unit.h.size() / 2;
  sidecar.key_id = key_id;
  vk::AudioBuffer buf;
  buf.sample_rate = unit.params.sample_rate;
  buf.samples = rotate_for_file(unit.h, sidecar.center_index);
  vk::write_wav(wav_path, buf, vk::WavFormat::kFloat32);
  vk::save_unit_sidecar(wav_path + ".txt", sidecar);
}

// The phase a sidecar recipe produced, regenerated bit-exactly.
vk::PhaseSpec regenerate_phase(const vk::UnitSidecar& sidecar) {
  if (sidecar.family != "fvn")
    throw std::runtime_error(
        "unit family '" + sidecar.family +
        "' cannot be regenerated from its sidecar; use a plain fvn unit");
  vk::SplitMix64 rng(sidecar.seed);
  return vk::design_phase(sidecar.params, rng);
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : f_(path, std::ios::trunc) {
    if (!f_) throw std::runtime_error("cannot open " + path);
    f_.imbue(std::locale::classic());
    f_.precision(12);
  }
  void header(const std::string& h) { f_ << h << '\n'; }
  template <typename... T>
  void row(T... cells) {
    bool first = true;
    ((f_ << (first ? "" : ",") << cells, first = false), ...);
    f_ << '\n';
  }

 private:
  std::ofstream f_;
};

struct CommonUnitFlags {
  double b_hz = 200.0;
  double fd_hz = 40.0;
  double phi_max = kPi / 2;
  double fs = 44100.0;
  std::size_t k_dft = 16384;
  std::uint64_t seed = 0;

  vk::FvnParams params() const {
    vk::FvnParams p;
    p.b_hz = b_hz;
    p.fd_hz = fd_hz;
    p.phi_max = phi_max;
    p.sample_rate = fs;
    p.k_dft = k_dft;
    return p;
  }
};

void add_unit_flags(CLI::App* cmd, CommonUnitFlags& f, bool with_b) {
  if (with_b) cmd->add_option("--b-hz", f.b_hz, "Smoother bandwidth, Hz");
  cmd->add_option("--fd-hz", f.fd_hz, "Smoother spacing, Hz");
  cmd->add_option("--phi-max", f.phi_max, "Phase range, radians");
  cmd->add_option("--fs", f.fs, "Sample rate, Hz");
  cmd->add_option("--k-dft", f.k_dft, "DFT length (even)");
  cmd->add_option("--seed", f.seed, "RNG seed")->required();
}

int run_ovn(const std::string& out, std::size_t length, double t_d,
            double fs, std::uint64_t seed) {
  const vk::VelvetNoise noise = vk::generate_ovn(length, t_d, seed);
  vk::AudioBuffer buf;
  buf.sample_rate = fs;
  buf.samples = noise.samples;
  vk::write_wav(out, buf, vk::WavFormat::kFloat32);
  vk::KeyValueFile kv;
  kv.set("command", "ovn");
  kv.set_u64("length", length);
  kv.set_double("t_d", t_d);
  kv.set_double("fs", fs);
  kv.set_u64("seed", seed);
  kv.set("out", out);
  write_provenance(out, kv);
  std::cout << "wrote " << out << " (" << length << " samples, "
            << std::count_if(noise.samples.begin(), noise.samples.end(),
                             [](double v) { return v != 0.0; })
            << " pulses)\n";
  return 0;
}

int run_fvn(const std::string& out, const CommonUnitFlags& f,
            const std::string& key_id) {
  const vk::FvnUnit unit = vk::synthesize_unit(f.params(), f.seed);
  save_unit(out, unit, "fvn", key_id);
  vk::KeyValueFile kv;
  kv.set("command", "fvn");
  kv.set_double("b_hz", f.b_hz);
  kv.set_double("fd_hz", f.fd_hz);
  kv.set_double("phi_max", f.phi_max);
  kv.set_double("fs", f.fs);
  kv.set_u64("k_dft", f.k_dft);
  kv.set_u64("seed", f.seed);
  if (!key_id.empty()) kv.set("key_id", key_id);
  kv.set("out", out);
  write_provenance(out, kv);
  std::cout << "wrote " << out << " (sigma_t = " << unit.sigma_t * 1e3
            << " ms)\n";
  return 0;
}

int run_ffvn(const std::string& out, const std::string& profile_path,
             const CommonUnitFlags& f, double fd_over_b) {
  const vk::DurationProfile profile =
      vk::load_duration_profile(profile_path);
  vk::FvnParams params = f.params();
  // Only the ratio matters: design_ffvn_phase replaces the magnitudes with
  // the warped-axis bandwidth.
  params.b_hz = 1000.0;
  params.fd_hz = 1000.0 * fd_over_b;
  const vk::FvnUnit unit =
      vk::synthesize_ffvn_unit(profile, params, f.seed);
  save_unit(out, unit, "ffvn", "");
  vk::KeyValueFile kv;
  kv.set("command", "ffvn");
  kv.set("profile", profile_path);
  kv.set_double("fd_over_b", fd_over_b);
  kv.set_double("phi_max", f.phi_max);
  kv.set_double("fs", f.fs);
  kv.set_u64("k_dft", f.k_dft);
  kv.set_u64("seed", f.seed);
  kv.set("out", out);
  write_provenance(out, kv);
  std::cout << "wrote " << out << " (sigma_t = " << unit.sigma_t * 1e3
            << " ms)\n";
  return 0;
}

int run_filter(const std::string& key_path, const std::string& in_path,
               const std::string& out, bool reverse) {
  const LoadedUnit key = load_unit(key_path);
  const vk::AudioBuffer x = vk::read_wav(in_path);
  const vk::HidingKey hiding_key{key.unit, key.sidecar.key_id};
  const vk::AudioBuffer y = reverse ? vk::recover(x, hiding_key)
                                    : vk::apply_allpass(x, hiding_key);
  vk::write_wav(out, y, vk::WavFormat::kFloat32);
  vk::KeyValueFile kv;
  kv.set("command", reverse ? "recover" : "filter");
  kv.set("key", key_path);
  kv.set("in", in_path);
  kv.set("out", out);
  write_provenance(out, kv);
  std::cout << "wrote " << out << " (" << y.samples.size() << " samples)\n";
  return 0;
}

int run_detect(const std::string& key_path, const std::string& in_path,
               const vk::TamperConfig& config) {
  const LoadedUnit key = load_unit(key_path);
  const vk::AudioBuffer y = vk::read_wav(in_path);
  const vk::TamperReport report =
      vk::detect_tamper(y, {key.unit, key.sidecar.key_id}, config);
  std::cout << vk::verdict_line(report) << '\n';
  return 0;
}

int run_excite(const std::string& mode, const std::string& out,
               const std::string& unit_path, const CommonUnitFlags& f,
               const vk::F0Trajectory& traj, double length_s,
               const std::string& carrier_path, double burst_phase,
               double burst_gain) {
  vk::AudioBuffer y;
  vk::KeyValueFile kv;
  kv.set("command", "excite");
  kv.set("mode", mode);
  if (mode == "frozen") {
    if (unit_path.empty())
      throw CLI::ValidationError("excite", "--unit is required for frozen");
    const LoadedUnit u = load_unit(unit_path);
    y = vk::frozen_ifvn(regenerate_phase(u.sidecar), traj, length_s);
    kv.set("unit", unit_path);
  } else if (mode == "random") {
    y = vk::random_ifvn(f.params(), traj, length_s, f.seed);
    kv.set_double("b_hz", f.b_hz);
    kv.set_double("fd_hz", f.fd_hz);
    kv.set_double("phi_max", f.phi_max);
    kv.set_double("fs", f.fs);
    kv.set_u64("k_dft", f.k_dft);
    kv.set_u64("seed", f.seed);
  } else if (mode == "bursts") {
    if (carrier_path.empty() || unit_path.empty())
      throw CLI::ValidationError(
          "excite", "--carrier and --unit are required for bursts");
    const vk::AudioBuffer carrier = vk::read_wav(carrier_path);
    const LoadedUnit u = load_unit(unit_path);
    y = vk::place_bursts(carrier, traj, u.unit, burst_phase, burst_gain);
    kv.set("carrier", carrier_path);
    kv.set("unit", unit_path);
    kv.set_double("burst_phase", burst_phase);
    kv.set_double("burst_gain", burst_gain);
  } else {
    throw CLI::ValidationError("excite", "unknown mode '" + mode + "'");
  }
  vk::write_wav(out, y, vk::WavFormat::kFloat32);
  kv.set_double("f0", traj.f_base_hz);
  kv.set_double("vibrato_rate_hz", traj.vibrato_rate_hz);
  kv.set_double("vibrato_depth_cent", traj.vibrato_depth_cent);
  kv.set_double("length_s", length_s);
  kv.set("out", out);
  write_provenance(out, kv);
  std::cout << "wrote " << out << " (" << y.samples.size() << " samples)\n";
  return 0;
}

int run_morph(const std::string& frozen_path, const std::string& out,
              const vk::F0Trajectory& traj, double length_s,
              std::uint64_t master_seed, double r_const,
              const std::string& eta_path, const std::string& cal_path) {
  const LoadedUnit frozen = load_unit(frozen_path);
  const vk::PhaseSpec frozen_phase = regenerate_phase(frozen.sidecar);
  std::function<double(double)> r_of_t;
  vk::KeyValueFile kv;
  kv.set("command", "morph");
  kv.set("frozen", frozen_path);
  if (!eta_path.empty()) {
    if (cal_path.empty())
      throw CLI::ValidationError("morph",
                                 "--eta-file needs --calibration");
    const auto points = vk::load_breakpoints(eta_path);
    vk::PrCalibration cal;
    {
      std::ifstream f(cal_path);
      if (!f) throw std::runtime_error("cannot open " + cal_path);
      std::string line;
      std::getline(f, line);  // header
      double r = 0.0, g = 0.0;
      char comma = 0;
      while (f >> r >> comma >> g) {
        cal.r_grid.push_back(r);
        cal.g_db.push_back(g);
      }
      if (cal.r_grid.empty())
        throw std::runtime_error(cal_path + ": no calibration rows");
    }
    r_of_t = [points, cal](double t) {
      return vk::invert_pr(cal, vk::eval_breakpoints(points, t));
    };
    kv.set("eta_file", eta_path);
    kv.set("calibration", cal_path);
  } else {
    if (!(r_const >= 0.0 && r_const <= 1.0))
      throw CLI::ValidationError("morph", "--r must be in [0,1]");
    r_of_t = [r_const](double) { return r_const; };
    kv.set_double("r", r_const);
  }
  const vk::AudioBuffer y =
      vk::morph_ifvn(frozen_phase, frozen.sidecar.params, traj, length_s,
                     master_seed, r_of_t);
  vk::write_wav(out, y, vk::WavFormat::kFloat32);
  kv.set_double("f0", traj.f_base_hz);
  kv.set_double("length_s", length_s);
  kv.set_u64("master_seed", master_seed);
  kv.set("out", out);
  write_provenance(out, kv);
  std::cout << "wrote " << out << " (" << y.samples.size() << " samples)\n";
  return 0;
}

int run_calibrate(const std::string& frozen_path, const std::string& out,
                  const vk::F0Trajectory& traj, double length_s,
                  std::size_t n_seeds, std::size_t grid_points,
                  std::uint64_t master_seed) {
  const LoadedUnit frozen = load_unit(frozen_path);
  if (grid_points < 2)
    throw CLI::ValidationError("calibrate", "--grid must be >= 2");
  std::vector<double> grid(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i)
    grid[i] = static_cast<double>(i) / static_cast<double>(grid_points - 1);
  const vk::PrCalibration cal = vk::calibrate_pr_ratio(
      frozen.sidecar.params, traj, regenerate_phase(frozen.sidecar), grid,
      n_seeds, length_s, master_seed);
  CsvWriter csv(out);
  csv.header("r,value");
  for (std::size_t i = 0; i < cal.r_grid.size(); ++i)
    csv.row(cal.r_grid[i], cal.g_db[i]);
  vk::KeyValueFile kv;
  kv.set("command", "calibrate");
  kv.set("frozen", frozen_path);
  kv.set_double("f0", traj.f_base_hz);
  kv.set_double("length_s", length_s);
  kv.set_u64("seeds", n_seeds);
  kv.set_u64("grid", grid_points);
  kv.set_u64("master_seed", master_seed);
  kv.set("out", out);
  write_provenance(out, kv);
  std::cout << "wrote " << out << " (" << cal.r_grid.size() << " rows)\n";
  return 0;
}

int run_analyze(const std::string& measure, const std::string& in_path,
                const std::string& out, double window_s, double hop_s,
                double threshold, std::size_t welch_len, double origin_s,
                bool explicit_origin) {
  const vk::AudioBuffer x = vk::read_wav(in_path);
  vk::KeyValueFile kv;
  kv.set("command", "analyze");
  kv.set("measure", measure);
  kv.set("in", in_path);
  kv.set("out", out);

  if (measure == "duration") {
    const double sigma =
        vk::duration(x,
                     explicit_origin ? vk::DurationOrigin::kExplicit
                                     : vk::DurationOrigin::kCentroid,
                     origin_s);
    CsvWriter csv(out);
    csv.header("name,value");
    csv.row("sigma_t_s", sigma);
    csv.row("erl_s", vk::erl(sigma));
    std::cout << "sigma_t_s=" << sigma << '\n';
  } else if (measure == "kurtosis") {
    vk::KurtosisConfig config;
    config.window_s = window_s;
    config.hop_s = hop_s;
    config.threshold = threshold;
    const std::vector<double> kappa = vk::running_kurtosis(x, config);
    CsvWriter csv(out);
    csv.header("time_s,value");
    for (std::size_t i = 0; i < kappa.size(); ++i)
      csv.row(static_cast<double>(i) * hop_s + window_s / 2, kappa[i]);
    std::cout << "exceedance="
              << vk::exceedance_fraction(kappa, threshold) << '\n';
  } else if (measure == "spectrogram") {
    const vk::Spectrogram sg = vk::spectrogram(x, window_s, hop_s);
    CsvWriter csv(out);
    csv.header("time_s,freq_hz,value");
    for (std::size_t t = 0; t < sg.times_s.size(); ++t)
      for (std::size_t k = 0; k < sg.frequencies_hz.size(); ++k)
        csv.row(sg.times_s[t], sg.frequencies_hz[k], sg.power[t][k]);
  } else if (measure == "psd") {
    const vk::Vec psd = vk::welch_psd(x.samples, welch_len, true);
    CsvWriter csv(out);
    csv.header("freq_hz,value");
    for (std::size_t k = 0; k < psd.size(); ++k)
      csv.row(static_cast<double>(k) * x.sample_rate /
                  static_cast<double>(welch_len),
              psd[k]);
  } else if (measure == "groupdelay") {
    const vk::CVec spec = vk::rfft(x.samples);
    vk::PhaseSpec phase;
    phase.sample_rate = x.sample_rate;
    phase.phase.resize(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i)
      phase.phase[i] = std::arg(spec[i]);
    const vk::GroupDelayCurve gd = vk::group_delay(phase);
    CsvWriter csv(out);
    csv.header("freq_hz,value");
    for (std::size_t i = 0; i < gd.frequencies_hz.size(); ++i)
      csv.row(gd.frequencies_hz[i], gd.tau_g_s[i]);
  } else if (measure == "distribution") {
    const vk::Vec sorted = vk::level_distribution(x.samples);
    CsvWriter csv(out);
    csv.header("value,cdf");
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      csv.row(sorted[i], (static_cast<double>(i) + 1.0) / n);
    std::cout << "ks_distance="
              << vk::ks_distance_vs_gaussian(x.samples) << '\n';
  } else if (measure == "centroid") {
    const vk::CentroidIdentity id = vk::centroid_identity_check(x);
    CsvWriter csv(out);
    csv.header("name,value");
    csv.row("time_centroid_s", id.lhs_s);
    csv.row("group_delay_centroid_s", id.rhs_s);
    std::cout << "lhs_s=" << id.lhs_s << " rhs_s=" << id.rhs_s << '\n';
  } else {
    throw CLI::ValidationError("analyze",
                               "unknown measure '" + measure + "'");
  }
  write_provenance(out, kv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.imbue(std::locale::classic());
  CLI::App app{"velvet-noise family signal toolkit"};
  app.set_version_flag("--version", vk::kVersion);
  app.require_subcommand(1);

  int rc = 0;
  // ovn
  {
    auto* cmd = app.add_subcommand("ovn", "Generate a velvet-noise sequence");
    auto length = std::make_shared<std::size_t>(44100);
    auto t_d = std::make_shared<double>(14.0);
    auto fs = std::make_shared<double>(44100.0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>("ovn.wav");
    cmd->add_option("--length", *length, "Length in samples");
    cmd->add_option("--t-d", *t_d, "Average pulse interval, samples");
    cmd->add_option("--fs", *fs, "Sample rate for the WAV header");
    cmd->add_option("--seed", *seed, "RNG seed")->required();
    cmd->add_option("--out", *out, "Output WAV");
    cmd->callback(
        [=, &rc] { rc = run_ovn(*out, *length, *t_d, *fs, *seed); });
  }
  // fvn
  {
    auto* cmd = app.add_subcommand("fvn", "Synthesize one all-pass unit");
    auto f = std::make_shared<CommonUnitFlags>();
    auto out = std::make_shared<std::string>("fvn_unit.wav");
    auto key_id = std::make_shared<std::string>();
    add_unit_flags(cmd, *f, true);
    cmd->add_option("--out", *out, "Output WAV (sidecar at <out>.txt)");
    cmd->add_option("--key-id", *key_id, "Mark the unit as a hiding key");
    cmd->callback([=, &rc] { rc = run_fvn(*out, *f, *key_id); });
  }
  // ffvn
  {
    auto* cmd = app.add_subcommand(
        "ffvn", "Synthesize a frequency-dependent-duration unit");
    auto f = std::make_shared<CommonUnitFlags>();
    auto profile = std::make_shared<std::string>();
    auto fd_over_b = std::make_shared<double>(1.0 / 3.0);
    auto out = std::make_shared<std::string>("ffvn_unit.wav");
    cmd->add_option("--profile", *profile, "Duration profile file")
        ->required();
    cmd->add_option("--fd-over-b", *fd_over_b,
                    "Smoother spacing as a fraction of bandwidth");
    cmd->add_option("--phi-max", f->phi_max, "Phase range, radians");
    cmd->add_option("--fs", f->fs, "Sample rate, Hz");
    cmd->add_option("--k-dft", f->k_dft, "DFT length (even)");
    cmd->add_option("--seed", f->seed, "RNG seed")->required();
    cmd->add_option("--out", *out, "Output WAV (sidecar at <out>.txt)");
    cmd->callback(
        [=, &rc] { rc = run_ffvn(*out, *profile, *f, *fd_over_b); });
  }
  // filter / recover
  for (const bool reverse : {false, true}) {
    auto* cmd = app.add_subcommand(
        reverse ? "recover" : "filter",
        reverse ? "Undo an all-pass key (time-reversed convolution)"
                : "Convolve with an all-pass key");
    auto key = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--key", *key, "Key WAV (sidecar at <key>.txt)")
        ->required();
    cmd->add_option("--in", *in, "Input WAV")->required();
    cmd->add_option("--out", *out, "Output WAV")->required();
    cmd->callback([=, &rc] { rc = run_filter(*key, *in, *out, reverse); });
  }
  // detect
  {
    auto* cmd = app.add_subcommand(
        "detect", "Check whether a signal still carries the key");
    auto key = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>();
    auto config = std::make_shared<vk::TamperConfig>();
    cmd->add_option("--key", *key, "Key WAV")->required();
    cmd->add_option("--in", *in, "Input WAV")->required();
    cmd->add_option("--window-s", config->kurtosis.window_s,
                    "Kurtosis window, seconds");
    cmd->add_option("--hop-s", config->kurtosis.hop_s,
                    "Kurtosis hop, seconds");
    cmd->add_option("--threshold", config->kurtosis.threshold,
                    "Kurtosis threshold");
    cmd->add_option("--min-exceedance", config->min_exceedance,
                    "Intact verdict needs at least this exceedance");
    cmd->callback([=, &rc] { rc = run_detect(*key, *in, *config); });
  }
  // excite
  {
    auto* cmd = app.add_subcommand(
        "excite", "Assemble an excitation signal (frozen/random/bursts)");
    auto mode = std::make_shared<std::string>("random");
    auto f = std::make_shared<CommonUnitFlags>();
    auto traj = std::make_shared<vk::F0Trajectory>();
    auto length_s = std::make_shared<double>(1.0);
    auto unit = std::make_shared<std::string>();
    auto carrier = std::make_shared<std::string>();
    auto burst_phase = std::make_shared<double>(0.0);
    auto burst_gain = std::make_shared<double>(1.0);
    auto out = std::make_shared<std::string>("excitation.wav");
    cmd->add_option("--mode", *mode, "frozen | random | bursts")
        ->check(CLI::IsMember({"frozen", "random", "bursts"}));
    cmd->add_option("--unit", *unit, "Unit WAV (frozen or bursts)");
    cmd->add_option("--b-hz", f->b_hz, "Smoother bandwidth, Hz (random)");
    cmd->add_option("--fd-hz", f->fd_hz, "Smoother spacing, Hz (random)");
    cmd->add_option("--phi-max", f->phi_max, "Phase range, radians");
    cmd->add_option("--fs", f->fs, "Sample rate, Hz");
    cmd->add_option("--k-dft", f->k_dft, "DFT length (even)");
    auto* seed_opt = cmd->add_option("--seed", f->seed, "RNG seed (random)");
    cmd->add_option("--f0", traj->f_base_hz, "Base f0, Hz");
    cmd->add_option("--vibrato-rate", traj->vibrato_rate_hz,
                    "Vibrato rate, Hz");
    cmd->add_option("--vibrato-depth-cent", traj->vibrato_depth_cent,
                    "Vibrato depth, cents");
    cmd->add_option("--length-s", *length_s, "Output length, seconds");
    cmd->add_option("--carrier", *carrier, "Carrier WAV (bursts)");
    cmd->add_option("--burst-phase", *burst_phase,
                    "Burst position within each period, [0,1)");
    cmd->add_option("--burst-gain", *burst_gain, "Burst gain");
    cmd->callback([=, &rc] {
      if (*mode == "random" && seed_opt->count() == 0)
        throw CLI::RequiredError("--seed (random mode)");
      rc = run_excite(*mode, *out, *unit, *f, *traj, *length_s, *carrier,
                      *burst_phase, *burst_gain);
    });
    cmd->add_option("--out", *out, "Output WAV");
  }
  // morph
  {
    auto* cmd = app.add_subcommand(
        "morph", "Interpolate a frozen unit against per-epoch random phases");
    auto frozen = std::make_shared<std::string>();
    auto traj = std::make_shared<vk::F0Trajectory>();
    auto length_s = std::make_shared<double>(1.0);
    auto master_seed = std::make_shared<std::uint64_t>(0);
    auto r = std::make_shared<double>(0.5);
    auto eta = std::make_shared<std::string>();
    auto cal = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("morph.wav");
    cmd->add_option("--frozen", *frozen, "Frozen unit WAV")->required();
    cmd->add_option("--f0", traj->f_base_hz, "Base f0, Hz");
    cmd->add_option("--vibrato-rate", traj->vibrato_rate_hz,
                    "Vibrato rate, Hz");
    cmd->add_option("--vibrato-depth-cent", traj->vibrato_depth_cent,
                    "Vibrato depth, cents");
    cmd->add_option("--length-s", *length_s, "Output length, seconds");
    cmd->add_option("--master-seed", *master_seed, "Master seed")
        ->required();
    cmd->add_option("--r", *r, "Constant morph ratio in [0,1]");
    cmd->add_option("--eta-file", *eta,
                    "Breakpoint file of target ratios (time_s value_db)");
    cmd->add_option("--calibration", *cal,
                    "Calibration CSV from `calibrate` (with --eta-file)");
    cmd->add_option("--out", *out, "Output WAV");
    cmd->callback([=, &rc] {
      rc = run_morph(*frozen, *out, *traj, *length_s, *master_seed, *r,
                     *eta, *cal);
    });
  }
  // calibrate
  {
    auto* cmd = app.add_subcommand(
        "calibrate",
        "Measure the periodic-to-random ratio across a morph grid");
    auto frozen = std::make_shared<std::string>();
    auto traj = std::make_shared<vk::F0Trajectory>();
    auto length_s = std::make_shared<double>(2.0);
    auto seeds = std::make_shared<std::size_t>(50);
    auto grid = std::make_shared<std::size_t>(11);
    auto master_seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>("calibration.csv");
    cmd->add_option("--frozen", *frozen, "Frozen unit WAV")->required();
    cmd->add_option("--f0", traj->f_base_hz, "Base f0, Hz");
    cmd->add_option("--length-s", *length_s, "Trial length, seconds");
    cmd->add_option("--seeds", *seeds, "Seeds per grid point");
    cmd->add_option("--grid", *grid, "Grid points across [0,1]");
    cmd->add_option("--master-seed", *master_seed, "Master seed")
        ->required();
    cmd->add_option("--out", *out, "Output CSV");
    cmd->callback([=, &rc] {
      rc = run_calibrate(*frozen, *out, *traj, *length_s, *seeds, *grid,
                         *master_seed);
    });
  }
  // analyze
  {
    auto* cmd = app.add_subcommand("analyze", "Measure a WAV into CSV");
    auto measure = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("analysis.csv");
    auto window_s = std::make_shared<double>(0.025);
    auto hop_s = std::make_shared<double>(0.005);
    auto threshold = std::make_shared<double>(10.0);
    auto welch = std::make_shared<std::size_t>(2048);
    auto origin_s = std::make_shared<double>(0.0);
    auto explicit_origin = std::make_shared<bool>(false);
    cmd->add_option("--measure", *measure,
                    "duration | kurtosis | spectrogram | psd | groupdelay | "
                    "distribution | centroid")
        ->required()
        ->check(CLI::IsMember({"duration", "kurtosis", "spectrogram", "psd",
                               "groupdelay", "distribution", "centroid"}));
    cmd->add_option("--in", *in, "Input WAV")->required();
    cmd->add_option("--out", *out, "Output CSV");
    cmd->add_option("--window-s", *window_s, "Analysis window, seconds");
    cmd->add_option("--hop-s", *hop_s, "Analysis hop, seconds");
    cmd->add_option("--threshold", *threshold, "Kurtosis threshold");
    cmd->add_option("--welch-len", *welch, "Welch segment length, samples");
    auto* origin_opt = cmd->add_option(
        "--origin-s", *origin_s, "Explicit time origin for duration");
    cmd->callback([=, &rc] {
      *explicit_origin = origin_opt->count() > 0;
      rc = run_analyze(*measure, *in, *out, *window_s, *hop_s, *threshold,
                       *welch, *origin_s, *explicit_origin);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return rc;
}
