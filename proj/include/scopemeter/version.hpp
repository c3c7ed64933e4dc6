#pragma once

namespace scopemeter {

inline constexpr const char* version = "0.1.0";

}  // namespace scopemeter
