#pragma once

namespace satdyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace satdyn
