#pragma once

namespace tfns {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tfns
