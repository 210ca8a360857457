#pragma once

namespace sqfcs {
inline constexpr const char* kVersion = "0.1.0";
}
