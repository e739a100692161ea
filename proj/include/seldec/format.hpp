#pragma once

#include <string>

namespace seldec {

/// Shortest-safe text for a double: 17 significant digits, '.' decimal
/// separator regardless of locale. Reads back to the same bits.
std::string format_double(double value);

}  // namespace seldec
