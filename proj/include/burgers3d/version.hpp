#pragma once

namespace burgers3d {

inline constexpr const char* kVersion = "1.0.0";

} // namespace burgers3d
