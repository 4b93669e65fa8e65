#pragma once

namespace geomineq {

inline constexpr const char* kVersion = "0.1.0";

} // namespace geomineq
