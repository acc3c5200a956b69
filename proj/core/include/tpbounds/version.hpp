#pragma once

namespace tpb {

inline constexpr const char* kToolName = "tpbounds";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace tpb
