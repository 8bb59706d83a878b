#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace surfspline {

// 17 significant digits: enough for an exact double round trip.
std::string format_exact(double value);
std::string format_g(double value, int significant);

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

/// Parses a full-string decimal; throws Error naming `what` on failure.
double parse_double(std::string_view text, std::string_view what = "number");
long long parse_int(std::string_view text, std::string_view what = "integer");

/// Comma-separated decimals; throws ParseError with the given line number.
std::vector<double> parse_csv_row(std::string_view line, int line_no);

}  // namespace surfspline
