#pragma once

namespace fracsum {

inline constexpr const char* version = "1.0.0";

}  // namespace fracsum
