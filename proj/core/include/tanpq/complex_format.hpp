#pragma once

#include <string>
#include <string_view>

#include "tanpq/family.hpp"

namespace tanpq {

/// Parse "a+bi" / "a-bi" (also plain "a" or "bi"); decimal point optional,
/// "e" exponents allowed. Throws std::invalid_argument on malformed input.
Complex parse_complex(std::string_view text);

/// "a+bi" with 17 significant digits.
std::string format_complex(Complex z);

} // namespace tanpq
