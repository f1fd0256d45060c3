#pragma once

namespace ekrlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ekrlab
