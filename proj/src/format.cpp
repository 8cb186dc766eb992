#include "scmin/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace scmin {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // normalize -0
  char buf[40];
  // Try increasing precision until the value round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace scmin
