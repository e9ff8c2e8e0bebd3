#pragma once

namespace fsens {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fsens
