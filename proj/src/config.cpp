#include "velvetkit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace velvetkit {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& what) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::runtime_error(what + ": not a number: '" + v + "'");
  }
  if (used != v.size())
    throw std::runtime_error(what + ": trailing junk in '" + v + "'");
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

void KeyValueFile::set(const std::string& key, const std::string& value) {
  for (auto& e : entries_) {
    if (e.first == key) {
      e.second = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void KeyValueFile::set_double(const std::string& key, double value) {
  set(key, format_double(value));
}

void KeyValueFile::set_u64(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.first == key) return e.second;
  }
  return std::nullopt;
}

std::string KeyValueFile::require(const std::string& key) const {
  if (auto v = get(key)) return *v;
  throw std::runtime_error("missing key '" + key + "'");
}

double KeyValueFile::require_double(const std::string& key) const {
  return to_double(require(key), key);
}

std::uint64_t KeyValueFile::require_u64(const std::string& key) const {
  const std::string v = require(key);
  std::uint64_t out = 0;
  const auto* begin = v.data();
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc{} || res.ptr != end)
    throw std::runtime_error(key + ": not an unsigned integer: '" + v + "'");
  return out;
}

std::string KeyValueFile::serialize() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.first;
    out += " = ";
    out += e.second;
    out += '\n';
  }
  return out;
}

KeyValueFile KeyValueFile::parse(const std::string& text,
                                 const std::string& origin) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": empty key");
    kv.entries_.emplace_back(key, value);
  }
  return kv;
}

void KeyValueFile::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path);
  const std::string text = serialize();
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("short write to " + path);
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  return parse(read_file(path), path);
}

void save_unit_sidecar(const std::string& path, const UnitSidecar& sidecar) {
  KeyValueFile kv;
  kv.set("type", "fvn_unit");
  kv.set("family", sidecar.family);
  kv.set_double("b_hz", sidecar.params.b_hz);
  kv.set_double("fd_hz", sidecar.params.fd_hz);
  kv.set_double("phi_max", sidecar.params.phi_max);
  kv.set_u64("k_dft", sidecar.params.k_dft);
  kv.set_double("sample_rate", sidecar.params.sample_rate);
  kv.set_u64("seed", sidecar.seed);
  kv.set_double("sigma_t_s", sidecar.sigma_t_s);
  kv.set_u64("center_index", sidecar.center_index);
  if (!sidecar.key_id.empty()) kv.set("key_id", sidecar.key_id);
  kv.save(path);
}

UnitSidecar load_unit_sidecar(const std::string& path) {
  const KeyValueFile kv = KeyValueFile::load(path);
  if (kv.require("type") != "fvn_unit")
    throw std::runtime_error(path + ": not a unit sidecar");
  UnitSidecar s;
  if (auto fam = kv.get("family")) s.family = *fam;
  s.params.b_hz = kv.require_double("b_hz");
  s.params.fd_hz = kv.require_double("fd_hz");
  s.params.phi_max = kv.require_double("phi_max");
  s.params.k_dft = kv.require_u64("k_dft");
  s.params.sample_rate = kv.require_double("sample_rate");
  s.seed = kv.require_u64("seed");
  s.sigma_t_s = kv.require_double("sigma_t_s");
  s.center_index = kv.require_u64("center_index");
  if (auto id = kv.get("key_id")) s.key_id = *id;
  validate(s.params);
  return s;
}

DurationProfile parse_duration_profile(const std::string& text,
                                       const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  KeyValueFile kv;
  BandProfile band;
  band.boundaries_hz.push_back(0.0);
  bool any_band = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "band") {
      double f_lo = 0.0, f_hi = 0.0, ms = 0.0;
      if (!(ls >> f_lo >> f_hi >> ms))
        throw std::runtime_error(where + ": expected 'band f_lo f_hi ms'");
      std::string rest;
      if (ls >> rest)
        throw std::runtime_error(where + ": trailing junk '" + rest + "'");
      if (std::abs(f_lo - band.boundaries_hz.back()) > 1e-9)
        throw std::runtime_error(where + ": bands must be contiguous from 0");
      band.boundaries_hz.push_back(f_hi);
      band.durations_s.push_back(ms * 1e-3);
      any_band = true;
    } else {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(where + ": expected 'key = value'");
      kv.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }
  const std::string form = kv.require("form");
  if (form == "sigmoid") {
    if (any_band)
      throw std::runtime_error(origin + ": band rows in a sigmoid profile");
    SigmoidProfile p;
    p.f_c_hz = kv.require_double("f_c_hz");
    p.f_tr_hz = kv.require_double("f_tr_hz");
    p.b_max_s = kv.require_double("b_max_ms") * 1e-3;
    p.b_min_s = kv.require_double("b_min_ms") * 1e-3;
    DurationProfile profile = p;
    validate(profile);
    return profile;
  }
  if (form == "band") {
    if (!any_band)
      throw std::runtime_error(origin + ": band profile without band rows");
    band.smoother_width_hz = kv.require_double("smoother_width_hz");
    DurationProfile profile = band;
    validate(profile);
    return profile;
  }
  throw std::runtime_error(origin + ": unknown form '" + form + "'");
}

DurationProfile load_duration_profile(const std::string& path) {
  return parse_duration_profile(read_file(path), path);
}

std::vector<std::pair<double, double>> parse_breakpoints(
    const std::string& text, const std::string& origin) {
  std::vector<std::pair<double, double>> points;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::istringstream ls(line);
    double t = 0.0, v = 0.0;
    if (!(ls >> t >> v))
      throw std::runtime_error(where + ": expected 'time_s value'");
    std::string rest;
    if (ls >> rest)
      throw std::runtime_error(where + ": trailing junk '" + rest + "'");
    if (!points.empty() && t < points.back().first)
      throw std::runtime_error(where + ": times must be non-decreasing");
    points.emplace_back(t, v);
  }
  if (points.empty()) throw std::runtime_error(origin + ": no breakpoints");
  return points;
}

std::vector<std::pair<double, double>> load_breakpoints(
    const std::string& path) {
  return parse_breakpoints(read_file(path), path);
}

double eval_breakpoints(const std::vector<std::pair<double, double>>& points,
                        double t) {
  if (points.empty()) throw std::invalid_argument("eval_breakpoints: empty");
  if (t <= points.front().first) return points.front().second;
  if (t >= points.back().first) return points.back().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (t <= points[i].first) {
      const double span = points[i].first - points[i - 1].first;
      if (span <= 0.0) return points[i].second;
      const double u = (t - points[i - 1].first) / span;
      return points[i - 1].second + u * (points[i].second - points[i - 1].second);
    }
  }
  return points.back().second;
}

}  // namespace velvetkit
