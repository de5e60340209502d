#pragma once

#include <string>

namespace tvp::csv {

// Round-trip-safe float formatting (17 significant digits, fixed layout);
// the only float serialization used in output files.
std::string num(double x);
std::string num(int x);

// Write with '\n' line endings regardless of platform.
void write_file(const std::string& path, const std::string& content);

}  // namespace tvp::csv
