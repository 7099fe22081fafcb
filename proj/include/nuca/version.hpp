#pragma once

namespace nuca {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace nuca
