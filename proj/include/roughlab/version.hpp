#pragma once

namespace roughlab {

inline constexpr const char* version = "0.1.0";

}
