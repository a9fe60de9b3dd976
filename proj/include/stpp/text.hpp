#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the CSV readers and the CLI grammars.
namespace stpp::text {

// Shortest round-trip-safe rendering: 17 significant digits.
std::string format_double(double v);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Whole-token parse; throws ParseError naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);
std::vector<double> parse_double_list(std::string_view s, std::string_view what);

}  // namespace stpp::text
