#pragma once

#include <string>

#include "velvetkit/audio_buffer.hpp"

namespace velvetkit {

enum class WavFormat { kPcm16, kPcm24, kFloat32 };

// Mono RIFF/WAVE only. Float files round-trip bit-exactly (up to the
// float32 cast); PCM uses symmetric scaling by 2^(bits-1) with clipping.
void write_wav(const std::string& path, const AudioBuffer& buffer,
               WavFormat format = WavFormat::kFloat32);

// Rejects anything but mono PCM16/PCM24/float32, reporting the byte offset
// of the first malformed field.
AudioBuffer read_wav(const std::string& path);

}  // namespace velvetkit
