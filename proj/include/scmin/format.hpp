#pragma once

#include <string>

namespace scmin {

// Shortest decimal string that round-trips the double, stable across runs
// (CSV output must be byte-identical for identical configs).
std::string format_double(double v);

}  // namespace scmin
