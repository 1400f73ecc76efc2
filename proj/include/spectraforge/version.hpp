#pragma once

namespace spectraforge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spectraforge
