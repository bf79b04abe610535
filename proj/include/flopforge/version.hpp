#pragma once

namespace flopforge {

inline constexpr const char* kVersion = "0.1.0";

} // namespace flopforge
