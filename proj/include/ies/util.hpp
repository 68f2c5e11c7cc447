#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ies {

// Shortest decimal representation that parses back to the same double.
// All CSV output goes through this so emitted files round-trip exactly.
std::string format_double(double v);

// Strict double parser; throws ConfigError on anything but a full numeric token.
double parse_double(std::string_view s);
long parse_long(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view line, char delim);

}  // namespace ies
