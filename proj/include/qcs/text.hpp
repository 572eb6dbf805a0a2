#pragma once

#include <string>

namespace qcs {

// Locale-independent, shortest round-trip decimal formatting. All file
// formats in this project (measurement headers, CSV) go through these.
std::string format_double(double v);
double parse_double(const std::string& s);
long parse_long(const std::string& s);
unsigned long long parse_u64(const std::string& s);

}  // namespace qcs
