#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace storalyze {

/// Report number formatting: `%.9g`, so repeated runs produce identical bytes.
std::string format_number(double value);
/// Undefined metrics render as the literal `undefined`.
std::string format_metric(std::optional<double> value);
/// Value rounded to nine significant digits (what format_number prints).
double round_sig9(double value);
/// Round-trip exact formatting (`%.17g`) for data files.
std::string format_exact(double value);

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace storalyze
