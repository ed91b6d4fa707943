#pragma once

namespace shrinkreg {
inline constexpr const char* kVersion = "0.1.0";
}
