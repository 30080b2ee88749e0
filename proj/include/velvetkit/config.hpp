#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "velvetkit/ffvn.hpp"
#include "velvetkit/fvn.hpp"

namespace velvetkit {

// Ordered `key = value` store: parse/serialize round-trips losslessly
// (comments and blank lines excepted).
class KeyValueFile {
 public:
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_u64(const std::string& key, std::uint64_t value);

  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;
  double require_double(const std::string& key) const;
  std::uint64_t require_u64(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  std::string serialize() const;
  static KeyValueFile parse(const std::string& text,
                            const std::string& origin = "config");

  void save(const std::string& path) const;
  static KeyValueFile load(const std::string& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Sidecar describing how a stored unit waveform was made. For family "fvn"
// the recipe regenerates the unit bit-exactly; "ffvn" units additionally
// need their duration profile (echoed in the provenance record).
struct UnitSidecar {
  FvnParams params;
  std::uint64_t seed = 0;
  double sigma_t_s = 0.0;
  std::string family = "fvn";
  std::size_t center_index = 0;  // rotation applied when writing the WAV
  std::string key_id;            // empty unless the unit is used as a key
};

void save_unit_sidecar(const std::string& path, const UnitSidecar& sidecar);
UnitSidecar load_unit_sidecar(const std::string& path);

// Frequency-dependent duration profile, one directive per line:
//   form = sigmoid            form = band
//   f_c_hz = 2000             smoother_width_hz = 400
//   f_tr_hz = 200             band 0 1000 0.1
//   b_max_ms = 3              band 1000 2000 0.4
//   b_min_ms = 0.0037         ...
// Band rows must be contiguous from 0 Hz; durations are in milliseconds.
DurationProfile parse_duration_profile(const std::string& text,
                                       const std::string& origin = "profile");
DurationProfile load_duration_profile(const std::string& path);

// Piecewise-linear control curve, one `time_s value` pair per line.
std::vector<std::pair<double, double>> parse_breakpoints(
    const std::string& text, const std::string& origin = "breakpoints");
std::vector<std::pair<double, double>> load_breakpoints(
    const std::string& path);
double eval_breakpoints(const std::vector<std::pair<double, double>>& points,
                        double t);

}  // namespace velvetkit
