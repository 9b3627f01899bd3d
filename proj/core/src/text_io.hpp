#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shiftgate::detail {

/// Shortest representation that round-trips; "inf"/"-inf" for infinities.
std::string format_double(double value);
std::string format_optional(const std::optional<double>& value);

double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);
/// Empty for "inf"; throws on malformed input.
std::optional<double> parse_optional(std::string_view text);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

/// Reads the next non-empty line (CR stripped). False at end of input.
bool next_line(std::istream& in, std::string& line);

/// Reads the header line and throws kMalformedRecord unless it matches.
void expect_header(std::istream& in, std::string_view expected);

std::string read_file(const std::filesystem::path& path);

}  // namespace shiftgate::detail
