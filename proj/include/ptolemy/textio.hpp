#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace ptolemy {

/// Shortest plain-or-scientific decimal form with 10 significant digits.
inline std::string format_sig10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// v rounded to the 10-significant-digit value format_sig10 prints.
inline double round_sig10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace ptolemy
