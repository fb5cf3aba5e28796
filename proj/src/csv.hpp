#pragma once

// Minimal CSV helpers shared by the file readers. Comma delimited, no quoting.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bess::detail {

using CsvRow = std::vector<std::string>;

/// Reads a CSV file whose first line must equal `header` exactly. Returns the
/// data rows; every row must have header.size() fields. Throws MalformedFile.
std::vector<CsvRow> read_csv(const std::filesystem::path& file,
                             const std::vector<std::string>& header);

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Decimal number with optional surrounding spaces and leading '+'; nullopt if
/// the text is not a number.
std::optional<double> try_parse_number(std::string_view text);

/// Parses a decimal number (nan/inf accepted so callers can report them).
double parse_number(std::string_view text, const std::filesystem::path& file, std::size_t line);

/// Shortest representation that parses back to the same double.
std::string format_number(double value);

}  // namespace bess::detail
