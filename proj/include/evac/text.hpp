#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace evac {

/// Shortest decimal form that parses back to the same double.
std::string format_number(double value);

/// Strict full-string parse; returns false on trailing garbage.
bool parse_number(std::string_view text, double& out);
bool parse_integer(std::string_view text, long long& out);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split_whitespace(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char separator);

}  // namespace evac
