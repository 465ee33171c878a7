#pragma once

namespace pausebench {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pausebench
