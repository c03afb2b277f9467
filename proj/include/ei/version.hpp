#pragma once

namespace ei {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace ei
