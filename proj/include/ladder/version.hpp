#pragma once

#include <string_view>

namespace ladder {

inline constexpr std::string_view version = LADDER_VERSION;

}  // namespace ladder
