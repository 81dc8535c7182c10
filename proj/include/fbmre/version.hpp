#pragma once

namespace fbmre {
inline constexpr const char* kVersion = "0.1.0";
}
