#pragma once

namespace rindler {

inline constexpr const char* kVersion = "0.1.0";

} // namespace rindler
