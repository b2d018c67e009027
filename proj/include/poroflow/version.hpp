#pragma once

namespace poroflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace poroflow
