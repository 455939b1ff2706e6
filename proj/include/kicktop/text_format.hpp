#pragma once

#include <string>

namespace kicktop {

// 17 significant digits, enough to round-trip a double exactly.
std::string g17(double value);

}  // namespace kicktop
