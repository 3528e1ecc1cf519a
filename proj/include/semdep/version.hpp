#pragma once

namespace semdep {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace semdep
