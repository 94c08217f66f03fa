#pragma once

namespace tto {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tto
