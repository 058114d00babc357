#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace storalyze::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Case-insensitive header lookup.
  std::optional<std::size_t> find(std::string_view column) const;
  std::size_t require(std::string_view column, const std::filesystem::path& source) const;
};

/// Comma-separated, first line is the header. Double-quoted fields may
/// contain commas; blank lines are skipped.
Table read(const std::filesystem::path& path);
Table parse(std::string_view text);

std::vector<std::string> split_line(std::string_view line);

/// Empty cells and NA/NaN spellings yield quiet NaN; anything else that is
/// not a number throws ParseError.
double parse_number(std::string_view cell);
std::optional<double> parse_optional_number(std::string_view cell);

std::string trim(std::string_view s);

}  // namespace storalyze::csv
