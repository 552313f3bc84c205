#pragma once

#include <cstdio>
#include <string>

namespace scenelint::detail {

inline std::string fixed(double value, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out(buf);
  if (out == "-0.00" || out == "-0.0" || out == "-0") out.erase(0, 1);
  return out;
}

}  // namespace scenelint::detail
