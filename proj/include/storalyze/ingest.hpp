#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "storalyze/timeseries.hpp"

namespace storalyze {

/// Longest run of missing hours that load_series will fill by linear interpolation.
inline constexpr std::size_t kMaxInterpolatedGap = 3;

/// Reads one series from a CSV file.
///
/// Wide files have a timestamp column plus one column per series and `column`
/// names the value column. Long files carry `series` (or `variable`) and
/// `value` columns and `column` selects the rows. The timestamp column is the
/// first of timestamp/datetime/time/snapshot/date found, else column 0.
///
/// Missing hours (empty or NaN cells, or skipped timestamps) are filled by
/// linear interpolation when a run is at most kMaxInterpolatedGap long.
TimeSeries load_series(const std::filesystem::path& path, std::string_view column, Unit unit);

/// Writes `timestamp,<name>` with round-trip exact values.
void write_series(const std::filesystem::path& path, const TimeSeries& s);

enum class CapexUnit { EurPerKw, EurPerKwh };

std::string_view to_string(CapexUnit unit);

struct CostAssumptions {
  std::string technology;
  int year = 0;
  double capex = 0.0;
  CapexUnit capex_unit = CapexUnit::EurPerKw;
  /// % of capex per year.
  std::optional<double> fom_pct;
  std::optional<int> lifetime_years;
  /// Per-unit conversion efficiency.
  std::optional<double> efficiency;
  double discount_rate = 0.07;
};

/// Canonical technology key: lower case, single spaces.
std::string technology_key(std::string_view name);

/// Cost assumptions keyed by technology and anchor year. Queries between
/// anchors interpolate linearly; a query outside the anchor range fails.
class CostTable {
 public:
  void add(CostAssumptions row);

  CostAssumptions at(std::string_view technology, int year) const;
  bool contains(std::string_view technology) const;
  std::vector<std::string> technologies() const;
  std::vector<int> anchor_years(std::string_view technology) const;

 private:
  std::map<std::string, std::map<int, CostAssumptions>> rows_;
};

/// Columns: technology, year, capex, capex_unit, fom_pct, lifetime_years,
/// efficiency, and optionally discount_rate. The last three value columns may
/// be left blank where a technology has no such figure.
CostTable load_costs(const std::filesystem::path& path);

}  // namespace storalyze
