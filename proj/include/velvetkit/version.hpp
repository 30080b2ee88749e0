#pragma once

namespace velvetkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace velvetkit
