#pragma once

namespace timeop {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace timeop
