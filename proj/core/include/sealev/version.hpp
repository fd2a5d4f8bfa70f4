#pragma once

namespace sealev {

inline constexpr const char* kHarnessVersion = "sealev-0.1.0";

}  // namespace sealev
