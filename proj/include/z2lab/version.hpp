#pragma once

namespace z2lab {

inline constexpr const char* version = "0.1.0";

}
