#pragma once

namespace boxlab {

inline constexpr const char* kProjectName = "ctc-boxlab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace boxlab
