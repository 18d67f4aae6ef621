#pragma once

namespace portcba {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace portcba
