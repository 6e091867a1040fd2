#pragma once

#include <string_view>

namespace cwe_analyzer {

inline constexpr std::string_view kToolName = "cwe-analyzer";
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace cwe_analyzer
