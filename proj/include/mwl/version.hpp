#pragma once

namespace mwl {
inline constexpr const char* kVersion = "0.1.0";
}
