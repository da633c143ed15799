#pragma once

namespace tvaudit {

inline constexpr const char* kToolName = "tvaudit";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace tvaudit
