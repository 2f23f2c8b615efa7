#pragma once

#include <string_view>

namespace modesplit {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace modesplit
