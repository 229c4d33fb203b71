#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sscd {

/// Shortest decimal text that parses back to the same double.
std::string format_real(double v);
/// Fixed six decimals, for human-facing tables.
std::string format_fixed(double v);
/// Rates like 0.4 as "0.4".
std::string format_rate(double v);

double parse_double(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<double> parse_rate_list(std::string_view s);

void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace sscd
