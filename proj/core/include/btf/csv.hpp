#pragma once

#include "btf/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace btf {

/// Parses a count table: a header row of series names followed by one row
/// per time point with a nonnegative integer in every cell.
/// Throws SchemaError with the offending line number on malformed input.
CountSeries read_count_csv(std::istream& in);
CountSeries read_count_csv(const std::filesystem::path& path);

void write_count_csv(std::ostream& out, const CountSeries& series);
void write_count_csv(const std::filesystem::path& path, const CountSeries& series);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Parses a full-string double; throws SchemaError otherwise.
double parse_double(std::string_view text);

/// Splits a CSV line on commas (no quoting support; names must not contain commas).
std::vector<std::string> split_csv_line(std::string_view line);

} // namespace btf
