#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace axlesim::csv {

/// 17 significant digits, enough for an exact round trip of any double.
std::string format(double value);

/// Strict parse of a full field; throws IoError on trailing junk.
double parse_double(std::string_view field);

std::vector<std::string> split(std::string_view line, char delimiter = ',');

std::string_view trim(std::string_view text);

} // namespace axlesim::csv
