#pragma once

namespace cshor {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cshor
