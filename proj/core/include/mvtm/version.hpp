#pragma once

namespace mvtm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mvtm
