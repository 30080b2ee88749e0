#include "velvetkit/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace velvetkit {

namespace {

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

[[noreturn]] void fail(const std::string& path, std::size_t offset,
                       const std::string& what) {
  throw std::runtime_error(path + ": " + what + " at byte " +
                           std::to_string(offset));
}

std::uint32_t get_u32(const std::vector<unsigned char>& d, std::size_t off) {
  return static_cast<std::uint32_t>(d[off]) |
         (static_cast<std::uint32_t>(d[off + 1]) << 8) |
         (static_cast<std::uint32_t>(d[off + 2]) << 16) |
         (static_cast<std::uint32_t>(d[off + 3]) << 24);
}

std::uint16_t get_u16(const std::vector<unsigned char>& d, std::size_t off) {
  return static_cast<std::uint16_t>(
      d[off] | (static_cast<std::uint16_t>(d[off + 1]) << 8));
}

}  // namespace

void write_wav(const std::string& path, const AudioBuffer& buffer,
               WavFormat format) {
  if (buffer.samples.empty())
    throw std::invalid_argument("write_wav: empty buffer");
  if (!(buffer.sample_rate > 0) ||
      buffer.sample_rate != std::floor(buffer.sample_rate))
    throw std::invalid_argument("write_wav: sample rate must be a positive integer");

  const bool is_float = format == WavFormat::kFloat32;
  const std::uint16_t bits =
      format == WavFormat::kPcm16 ? 16 : (format == WavFormat::kPcm24 ? 24 : 32);
  const std::uint16_t block = static_cast<std::uint16_t>(bits / 8);
  const auto n = buffer.samples.size();
  const auto data_bytes = static_cast<std::uint32_t>(n * block);

  std::string out;
  out.reserve(58 + data_bytes);
  out += "RIFF";
  put_u32(out, 4 + 8 + 16 + (is_float ? 2 + 8 + 4 : 0) + 8 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, is_float ? 18u : 16u);
  put_u16(out, is_float ? 3 : 1);  // IEEE float / PCM
  put_u16(out, 1);                 // mono
  const auto rate = static_cast<std::uint32_t>(buffer.sample_rate);
  put_u32(out, rate);
  put_u32(out, rate * block);
  put_u16(out, block);
  put_u16(out, bits);
  if (is_float) {
    put_u16(out, 0);  // no extension bytes
    out += "fact";
    put_u32(out, 4);
    put_u32(out, static_cast<std::uint32_t>(n));
  }
  out += "data";
  put_u32(out, data_bytes);

  for (double v : buffer.samples) {
    if (is_float) {
      const auto f = static_cast<float>(v);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      put_u32(out, u);
    } else if (bits == 16) {
      const double scaled = std::clamp(v * 32768.0, -32768.0, 32767.0);
      const auto q = static_cast<std::int16_t>(std::lround(scaled));
      put_u16(out, static_cast<std::uint16_t>(q));
    } else {
      const double scaled = std::clamp(v * 8388608.0, -8388608.0, 8388607.0);
      const auto q = static_cast<std::int32_t>(std::lround(scaled));
      out.push_back(static_cast<char>(q & 0xff));
      out.push_back(static_cast<char>((q >> 8) & 0xff));
      out.push_back(static_cast<char>((q >> 16) & 0xff));
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_wav: cannot open " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write_wav: short write to " + path);
}

AudioBuffer read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_wav: cannot open " + path);
  std::vector<unsigned char> d((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
  if (d.size() < 12) fail(path, d.size(), "truncated RIFF header");
  if (std::memcmp(d.data(), "RIFF", 4) != 0) fail(path, 0, "missing RIFF tag");
  if (std::memcmp(d.data() + 8, "WAVE", 4) != 0)
    fail(path, 8, "missing WAVE tag");

  std::uint16_t fmt_code = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_off = 0, data_len = 0;
  std::size_t off = 12;
  while (off + 8 <= d.size()) {
    const std::size_t body = get_u32(d, off + 4);
    const std::size_t body_off = off + 8;
    if (body_off + body > d.size())
      fail(path, off + 4, "chunk overruns file");
    if (std::memcmp(d.data() + off, "fmt ", 4) == 0) {
      if (body < 16) fail(path, off + 4, "fmt chunk too small");
      fmt_code = get_u16(d, body_off);
      channels = get_u16(d, body_off + 2);
      rate = get_u32(d, body_off + 4);
      bits = get_u16(d, body_off + 14);
      have_fmt = true;
    } else if (std::memcmp(d.data() + off, "data", 4) == 0) {
      data_off = body_off;
      data_len = body;
      break;
    }
    off = body_off + body + (body & 1);  // chunks are word-aligned
  }
  if (!have_fmt) fail(path, off, "missing fmt chunk");
  if (data_off == 0) fail(path, off, "missing data chunk");
  if (channels != 1) fail(path, 0, "only mono is supported");
  if (rate == 0) fail(path, 0, "zero sample rate");

  const bool is_float = fmt_code == 3 && bits == 32;
  const bool pcm16 = fmt_code == 1 && bits == 16;
  const bool pcm24 = fmt_code == 1 && bits == 24;
  if (!is_float && !pcm16 && !pcm24)
    fail(path, 0, "unsupported sample format");
  const std::size_t block = bits / 8;
  if (data_len % block != 0) fail(path, data_off, "ragged data chunk");

  AudioBuffer buffer;
  buffer.sample_rate = rate;
  buffer.samples.resize(data_len / block);
  for (std::size_t i = 0; i < buffer.samples.size(); ++i) {
    const std::size_t p = data_off + i * block;
    if (is_float) {
      const std::uint32_t u = get_u32(d, p);
      float v;
      std::memcpy(&v, &u, 4);
      buffer.samples[i] = v;
    } else if (pcm16) {
      buffer.samples[i] =
          static_cast<std::int16_t>(get_u16(d, p)) / 32768.0;
    } else {
      std::int32_t q = d[p] | (d[p + 1] << 8) | (d[p + 2] << 16);
      if (q & 0x800000) q |= ~0xffffff;  // sign-extend
      buffer.samples[i] = q / 8388608.0;
    }
  }
  return buffer;
}

}  // namespace velvetkit
