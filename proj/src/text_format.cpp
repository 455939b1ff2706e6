#include "kicktop/text_format.hpp"

#include <cstdio>

namespace kicktop {

std::string g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace kicktop
