#pragma once

namespace jengap {

inline constexpr const char* kToolName = "jengap";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace jengap
