#pragma once

namespace ensvol {

inline constexpr const char* version = "1.0.0";

} // namespace ensvol
