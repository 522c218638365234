#pragma once

namespace sis {

inline constexpr const char* kToolVersion = "1.0.0";

// Identifies the counter-based RNG scheme so reports state their
// bit-compatibility contract explicitly.
inline constexpr const char* kRngId = "splitmix64-counter-v1";

}  // namespace sis
