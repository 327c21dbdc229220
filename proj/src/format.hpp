#pragma once

#include <cstdio>
#include <string>

namespace dirac {

/// Full-precision scientific notation used by every CSV writer.
inline std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

}  // namespace dirac
