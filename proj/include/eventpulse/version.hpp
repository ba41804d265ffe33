#pragma once

namespace eventpulse {

inline constexpr const char* kToolName = "eventpulse";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace eventpulse
