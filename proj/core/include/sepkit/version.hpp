#pragma once

namespace sepkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sepkit
