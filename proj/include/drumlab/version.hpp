#pragma once

namespace drumlab {

inline constexpr const char* kVersion = "0.1.0";

}
