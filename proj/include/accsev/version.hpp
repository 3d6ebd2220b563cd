#pragma once

namespace accsev {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace accsev
