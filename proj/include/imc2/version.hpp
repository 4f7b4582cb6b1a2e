#pragma once

namespace imc2 {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace imc2
