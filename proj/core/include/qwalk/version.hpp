#pragma once

#include <string_view>

namespace qwalk {

inline constexpr std::string_view kProgramName = "qwalk";
inline constexpr std::string_view kVersion = "0.1.0";

} // namespace qwalk
