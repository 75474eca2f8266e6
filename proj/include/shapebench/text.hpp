#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace shapebench::text {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);
/// Fixed-point with `digits` decimals.
std::string format_fixed(double v, int digits);

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s) noexcept;

/// Strict parses of the whole string; throw std::invalid_argument on failure.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);
unsigned long long parse_u64(std::string_view s);

}  // namespace shapebench::text
