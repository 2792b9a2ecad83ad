#pragma once

#include <string_view>

namespace pscontact {

inline constexpr std::string_view kEngineVersion = "1.0.0";

} // namespace pscontact
