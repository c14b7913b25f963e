#pragma once

#include <string>

namespace nadsthermo {

/// Shortest round-trip decimal form of a double, '.' separator, no locale.
std::string format_number(double value);

}  // namespace nadsthermo
