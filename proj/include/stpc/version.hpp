#pragma once

namespace stpc {

inline constexpr const char* kToolName = "stpc";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "stpc-report/1";

} // namespace stpc
